"""Data-to-channel mapping: one daily record becomes one render plan."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .errors import InvalidScaleError, MappingError, RadiusBoundError
from .geometry import RenderParams, check_dot_radius
from .grid import GridSpec, SymmetryGroup

Value = Union[float, str]
RGB = tuple[float, float, float]


class Channel(str, Enum):
    DOT_SIZE = "dot_size"
    LINE_TYPE = "line_type"
    COLOR = "color"
    FILL = "fill"
    PATTERN = "pattern"


CHANNEL_ORDER = tuple(Channel)


class LineType(str, Enum):
    SINGLE = "single"
    DOUBLE = "double"
    DOUBLE_FILLED = "double_filled"


class FillKind(str, Enum):
    EMPTY = "empty"
    HATCH_H = "hatch_h"
    HATCH_V = "hatch_v"
    HATCH_D = "hatch_d"
    CHECKER = "checker"
    DOTS = "dots"
    CONCENTRIC = "concentric"


class Density(str, Enum):
    SPARSE = "sparse"
    MEDIUM = "medium"
    DENSE = "dense"


HATCH_SPACING = {Density.SPARSE: 0.6, Density.MEDIUM: 0.4, Density.DENSE: 0.25}


@dataclass(frozen=True)
class Fill:
    kind: FillKind = FillKind.EMPTY
    density: Density = Density.MEDIUM

    def __str__(self) -> str:
        return f"{self.kind.value}/{self.density.value}"


@dataclass(frozen=True)
class Pigment:
    name: str
    rgb: RGB

    def __post_init__(self) -> None:
        if len(self.rgb) != 3 or not all(0.0 <= c <= 1.0 for c in self.rgb):
            raise ValueError(f"pigment {self.name!r} components must lie in [0, 1], got {self.rgb}")

    @property
    def hex(self) -> str:
        return rgb_hex(self.rgb)


def rgb_hex(rgb: RGB) -> str:
    return "#" + "".join(f"{int(round(c * 255)):02x}" for c in rgb)


# Material hues, not measured values; a spec file may override them.
BUILTIN_PIGMENTS: dict[str, Pigment] = {
    p.name: p
    for p in (
        Pigment("rice_white", (0.96, 0.95, 0.91)),
        Pigment("turmeric", (0.89, 0.70, 0.24)),
        Pigment("kumkum", (0.76, 0.07, 0.12)),
        Pigment("laterite", (0.55, 0.33, 0.14)),
    )
}


def mix_pigments(parts: list[tuple[Pigment, float]]) -> RGB:
    """Weighted component-wise average; weights are normalised to sum 1."""
    if any(w < 0 for _, w in parts):
        raise ValueError("pigment weights must be non-negative")
    total = sum(w for _, w in parts)
    if total <= 0:
        raise ValueError("at least one pigment weight must be positive")
    return tuple(sum(p.rgb[i] * w for p, w in parts) / total for i in range(3))


@dataclass(frozen=True)
class LinearScale:
    lo: float
    hi: float
    rlo: float
    rhi: float
    clamp: bool = False

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise InvalidScaleError(f"linear scale domain {self.lo}..{self.hi} is degenerate")
        if not self.rlo <= self.rhi:
            raise InvalidScaleError(f"linear scale range {self.rlo}..{self.rhi} is reversed")

    def __call__(self, x: float) -> float:
        y = self.rlo + (x - self.lo) * (self.rhi - self.rlo) / (self.hi - self.lo)
        if self.clamp:
            y = min(max(y, self.rlo), self.rhi)
        return y


def linear_scale(lo: float, hi: float, rlo: float, rhi: float, clamp: bool = False) -> LinearScale:
    return LinearScale(lo, hi, rlo, rhi, clamp)


DEFAULT_KEY = "default"


@dataclass(frozen=True)
class CategoryMap:
    """Ordered category -> channel value table; key ``default`` is the fallback."""

    pairs: tuple[tuple[str, object], ...]

    def lookup(self, category: str):
        for key, value in self.pairs:
            if key == category:
                return value
        for key, value in self.pairs:
            if key == DEFAULT_KEY:
                return value
        raise KeyError(category)


Scale = Union[LinearScale, CategoryMap]


@dataclass(frozen=True)
class Binding:
    field: str
    channel: Channel
    scale: Scale


@dataclass(frozen=True)
class MappingSpec:
    grid: GridSpec
    symmetry: SymmetryGroup = SymmetryGroup.NONE
    bindings: tuple[Binding, ...] = ()
    pigments: tuple[Pigment, ...] = ()  # overrides and additions to the built-in palette

    def binding(self, channel: Channel) -> Binding | None:
        return next((b for b in self.bindings if b.channel is channel), None)

    @property
    def palette(self) -> dict[str, Pigment]:
        palette = dict(BUILTIN_PIGMENTS)
        palette.update((p.name, p) for p in self.pigments)
        return palette


@dataclass(frozen=True)
class DailyRecord:
    date: dt.date | None  # None for an inline one-off record
    fields: dict[str, Value] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return self.date.isoformat() if self.date is not None else "record"


@dataclass(frozen=True)
class RenderPlan:
    dot_radius: float = 0.35
    line_type: LineType = LineType.SINGLE
    pigment: str = "rice_white"
    color: RGB = BUILTIN_PIGMENTS["rice_white"].rgb
    fill: Fill = Fill()
    pattern_index: int = 0


def resolve(spec: MappingSpec, record: DailyRecord, params: RenderParams | None = None) -> RenderPlan:
    params = params or RenderParams()
    plan = {}
    for binding in spec.bindings:
        if binding.field not in record.fields:
            raise MappingError(f"{record.label}: missing field {binding.field!r}")
        value = record.fields[binding.field]
        channel = binding.channel
        if channel is Channel.DOT_SIZE:
            if not isinstance(binding.scale, LinearScale):
                raise MappingError(f"dot_size needs a linear scale (field {binding.field!r})")
            if isinstance(value, str):
                raise MappingError(f"{record.label}: field {binding.field!r} must be numeric, got {value!r}")
            radius = binding.scale(value)
            try:
                check_dot_radius(radius, params.stroke_width, params.half_gap)
            except RadiusBoundError as exc:
                raise RadiusBoundError(f"{record.label}: {exc}") from None
            if radius <= 0:
                raise RadiusBoundError(f"{record.label}: dot radius {radius} is not positive")
            plan["dot_radius"] = radius
            continue
        mapped = _lookup(binding, value, record)
        if channel is Channel.LINE_TYPE:
            plan["line_type"] = LineType(mapped)
        elif channel is Channel.COLOR:
            pigment = spec.palette.get(mapped)
            if pigment is None:
                raise MappingError(f"unknown pigment {mapped!r}")
            plan["pigment"] = pigment.name
            plan["color"] = pigment.rgb
        elif channel is Channel.FILL:
            plan["fill"] = mapped
        elif channel is Channel.PATTERN:
            plan["pattern_index"] = int(mapped)
    return RenderPlan(**plan)


def _lookup(binding: Binding, value: Value, record: DailyRecord):
    if not isinstance(binding.scale, CategoryMap):
        raise MappingError(f"channel {binding.channel.value} needs a category map")
    key = value if isinstance(value, str) else format_number(value)
    try:
        return binding.scale.lookup(key)
    except KeyError:
        raise MappingError(
            f"{record.label}: value {key!r} of field {binding.field!r} is not mapped and no default is declared"
        ) from None


def format_number(x: float) -> str:
    """Shortest text that reads back to the same float; integers lose their '.0'."""
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))
