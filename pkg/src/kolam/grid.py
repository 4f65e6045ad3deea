"""Dot lattice model in a doubled integer frame.

The drawing canvas is ``[0, 2W] x [0, 2H]``.  Dots sit on odd-odd points,
strand vertices on points with exactly one odd coordinate, and gate sites
are the interior strand vertices lying between two adjacent dots.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .errors import InvalidGridError, InvalidSymmetryError


class SiteKind(str, Enum):
    V = "V"  # between vertically adjacent dots: x odd, y even
    H = "H"  # between horizontally adjacent dots: x even, y odd


@dataclass(frozen=True, order=True)
class GateSite:
    x: int
    y: int
    kind: SiteKind


class Element(str, Enum):
    """Isometries of the canvas rectangle."""

    IDENTITY = "e"
    H_MIRROR = "h"  # flip across the vertical center line
    V_MIRROR = "v"  # flip across the horizontal center line
    ROT180 = "r180"
    ROT90 = "r90"
    ROT270 = "r270"
    DIAGONAL = "d"  # transpose, swaps x and y
    ANTIDIAGONAL = "a"

    @property
    def needs_square(self) -> bool:
        return self in _SQUARE_ONLY


_SQUARE_ONLY = frozenset({Element.ROT90, Element.ROT270, Element.DIAGONAL, Element.ANTIDIAGONAL})

_INVERSE = {
    Element.ROT90: Element.ROT270,
    Element.ROT270: Element.ROT90,
}


def inverse(element: Element) -> Element:
    return _INVERSE.get(element, element)


class SymmetryGroup(str, Enum):
    NONE = "none"
    H_MIRROR = "h"
    V_MIRROR = "v"
    ROT180 = "rot180"
    D2 = "d2"  # {e, h, v, rot180}; the largest group available on non-square grids
    D4 = "d4"

    @property
    def elements(self) -> tuple[Element, ...]:
        return _GROUP_ELEMENTS[self]

    @property
    def order(self) -> int:
        return len(self.elements)

    @classmethod
    def parse(cls, text: str) -> SymmetryGroup:
        key = text.strip().lower()
        key = _GROUP_ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(g.value for g in cls)
            raise InvalidSymmetryError(f"unknown symmetry {text!r} (expected one of {names})") from None

    def contains(self, other: SymmetryGroup) -> bool:
        return set(other.elements) <= set(self.elements)


_GROUP_ELEMENTS = {
    SymmetryGroup.NONE: (Element.IDENTITY,),
    SymmetryGroup.H_MIRROR: (Element.IDENTITY, Element.H_MIRROR),
    SymmetryGroup.V_MIRROR: (Element.IDENTITY, Element.V_MIRROR),
    SymmetryGroup.ROT180: (Element.IDENTITY, Element.ROT180),
    SymmetryGroup.D2: (Element.IDENTITY, Element.H_MIRROR, Element.V_MIRROR, Element.ROT180),
    SymmetryGroup.D4: tuple(Element),
}

_GROUP_ALIASES = {"h-mirror": "h", "v-mirror": "v", "rot-180": "rot180", "klein": "d2"}


@dataclass(frozen=True)
class GridSpec:
    width: int
    height: int

    def __post_init__(self) -> None:
        for name, value in (("width", self.width), ("height", self.height)):
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise InvalidGridError(f"grid {name} must be a positive integer, got {value!r}")

    @property
    def is_square(self) -> bool:
        return self.width == self.height

    @property
    def canvas_width(self) -> int:
        return 2 * self.width

    @property
    def canvas_height(self) -> int:
        return 2 * self.height

    @property
    def dot_count(self) -> int:
        return self.width * self.height

    @property
    def site_count(self) -> int:
        return 2 * self.width * self.height - self.width - self.height

    @cached_property
    def dots(self) -> tuple[tuple[int, int], ...]:
        """Dot centers, sorted by (y, x)."""
        return tuple((2 * i + 1, 2 * j + 1) for j in range(self.height) for i in range(self.width))

    @cached_property
    def sites(self) -> tuple[GateSite, ...]:
        return tuple(_enumerate_sites(self))

    @cached_property
    def site_index(self) -> dict[tuple[int, int], int]:
        return {(s.x, s.y): k for k, s in enumerate(self.sites)}

    def is_wall(self, x: int, y: int) -> bool:
        return x in (0, self.canvas_width) or y in (0, self.canvas_height)

    def contains(self, x: int, y: int) -> bool:
        return 0 <= x <= self.canvas_width and 0 <= y <= self.canvas_height

    def strand_vertices(self) -> list[tuple[int, int]]:
        """All points with exactly one odd coordinate, sorted by (y, x)."""
        return [
            (x, y)
            for y in range(self.canvas_height + 1)
            for x in range(self.canvas_width + 1)
            if (x + y) % 2 == 1
        ]

    def check_group(self, group: SymmetryGroup) -> None:
        if group is SymmetryGroup.D4 and not self.is_square:
            raise InvalidSymmetryError(
                f"d4 symmetry needs a square grid, got {self.width}x{self.height}"
            )

    def __str__(self) -> str:
        return f"{self.width}x{self.height}"


def make_grid(width: int, height: int) -> GridSpec:
    return GridSpec(width, height)


def parse_dims(text: str) -> GridSpec:
    """Parse ``"WxH"`` into a grid."""
    parts = text.lower().split("x")
    if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
        raise InvalidGridError(f"expected grid dimensions like 3x3, got {text!r}")
    return GridSpec(int(parts[0]), int(parts[1]))


def gate_sites(grid: GridSpec) -> list[GateSite]:
    """Canonical order: V-sites by (y, x), then H-sites by (y, x)."""
    return list(grid.sites)


def _enumerate_sites(grid: GridSpec):
    cw, ch = grid.canvas_width, grid.canvas_height
    v_sites = [GateSite(x, y, SiteKind.V) for y in range(2, ch, 2) for x in range(1, cw, 2)]
    h_sites = [GateSite(x, y, SiteKind.H) for y in range(1, ch, 2) for x in range(2, cw, 2)]
    return v_sites + h_sites


def transform_point(grid: GridSpec, element: Element, x: int, y: int) -> tuple[int, int]:
    """Image of a canvas point under an isometry of the canvas rectangle."""
    if element.needs_square and not grid.is_square:
        raise InvalidSymmetryError(f"element {element.value} needs a square grid, got {grid}")
    w, h = grid.canvas_width, grid.canvas_height
    match element:
        case Element.IDENTITY:
            return x, y
        case Element.H_MIRROR:
            return w - x, y
        case Element.V_MIRROR:
            return x, h - y
        case Element.ROT180:
            return w - x, h - y
        case Element.ROT90:
            return h - y, x
        case Element.ROT270:
            return y, w - x
        case Element.DIAGONAL:
            return y, x
        case Element.ANTIDIAGONAL:
            return h - y, w - x
    raise InvalidSymmetryError(f"unknown element {element!r}")


def apply_symmetry(grid: GridSpec, element: Element, site: GateSite) -> GateSite:
    x, y = transform_point(grid, element, site.x, site.y)
    kind = SiteKind.V if x % 2 == 1 else SiteKind.H
    return GateSite(x, y, kind)


def site_permutation(grid: GridSpec, element: Element) -> tuple[int, ...]:
    """perm[k] is the canonical index of the image of site k."""
    index = grid.site_index
    return tuple(index[transform_point(grid, element, s.x, s.y)] for s in grid.sites)


def orbits(grid: GridSpec, group: SymmetryGroup) -> list[tuple[int, ...]]:
    """Partition of site indices into orbits.

    Each orbit is a sorted tuple of indices; orbits are ordered by their
    smallest member.
    """
    grid.check_group(group)
    perms = [site_permutation(grid, e) for e in group.elements]
    seen = [False] * grid.site_count
    result = []
    for k in range(grid.site_count):
        if seen[k]:
            continue
        orbit = sorted({p[k] for p in perms})
        for j in orbit:
            seen[j] = True
        result.append(tuple(orbit))
    return result
