"""Single-loop configuration search and the pattern catalog."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import KolamParseError, NoPatternError, SearchExhaustedError, TooLargeError
from .grid import GridSpec, SymmetryGroup, orbits
from .trace import GateConfig, loop_count, parse_header

MAX_ORBITS = 22
CATALOG_HEADER = "kolam-catalog"


@dataclass(frozen=True)
class SearchRequest:
    grid: GridSpec
    symmetry: SymmetryGroup = SymmetryGroup.NONE
    seed: int = 0
    openness: float = 0.5
    max_restarts: int = 200

    def __post_init__(self) -> None:
        if not 0.0 <= self.openness <= 1.0:
            raise ValueError(f"openness target must lie in [0, 1], got {self.openness}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.max_restarts < 0:
            raise ValueError("max_restarts must be non-negative")
        self.grid.check_group(self.symmetry)


@dataclass(frozen=True)
class Catalog:
    grid: GridSpec
    symmetry: SymmetryGroup
    entries: tuple[str, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.entries)

    def config(self, k: int) -> GateConfig:
        return GateConfig.from_bits(self.grid, self.entries[k])


def expand(grid: GridSpec, orbit_list: list[tuple[int, ...]], assignment: int) -> GateConfig:
    """Full configuration with orbit k closed iff bit k of ``assignment`` is set."""
    states = [False] * grid.site_count
    for k, orbit in enumerate(orbit_list):
        if assignment >> k & 1:
            for j in orbit:
                states[j] = True
    return GateConfig(grid, tuple(states))


def enumerate_single_loop(grid: GridSpec, symmetry: SymmetryGroup = SymmetryGroup.NONE) -> Catalog:
    orbit_list = orbits(grid, symmetry)
    if len(orbit_list) > MAX_ORBITS:
        raise TooLargeError(
            f"{grid} grid under {symmetry.value} has {len(orbit_list)} orbits; "
            f"exhaustive enumeration is limited to {MAX_ORBITS}"
        )
    found = []
    for assignment in range(1 << len(orbit_list)):
        config = expand(grid, orbit_list, assignment)
        if loop_count(config) == 1:
            found.append(config.bits)
    return Catalog(grid, symmetry, tuple(sorted(found)))


def find_single_loop(request: SearchRequest) -> GateConfig:
    """Seeded greedy orbit-toggle search for a symmetric single-loop config.

    Each round re-traces every orbit toggle and keeps the one that brings the
    loop count closest to 1.  Ties go to a seeded random pick.  A round with
    no strict improvement triggers a restart from a fresh random config.
    """
    grid = request.grid
    orbit_list = orbits(grid, request.symmetry)
    if not orbit_list:
        config = GateConfig(grid, ())
        if loop_count(config) == 1:
            return config
        raise SearchExhaustedError(f"no gate sites on {grid} and loop count is not 1")

    rng = random.Random(request.seed)
    for _ in range(request.max_restarts + 1):
        assignment = [rng.random() >= request.openness for _ in orbit_list]
        current = _assemble(grid, orbit_list, assignment)
        score = abs(loop_count(current) - 1)
        while score > 0:
            best_score, best = score, []
            for k, orbit in enumerate(orbit_list):
                trial = _flip(current, orbit)
                s = abs(loop_count(trial) - 1)
                if s < best_score:
                    best_score, best = s, [k]
                elif s == best_score and best and s < score:
                    best.append(k)
            if not best:
                break
            pick = best[0] if len(best) == 1 else rng.choice(best)
            current = _flip(current, orbit_list[pick])
            score = best_score
        if score == 0:
            return current
    raise SearchExhaustedError(
        f"no single-loop {request.symmetry.value}-symmetric configuration found on {grid} "
        f"after {request.max_restarts} restarts (seed {request.seed})"
    )


def _assemble(grid: GridSpec, orbit_list, closed_flags) -> GateConfig:
    states = [False] * grid.site_count
    for orbit, closed in zip(orbit_list, closed_flags):
        for j in orbit:
            states[j] = closed
    return GateConfig(grid, tuple(states))


def _flip(config: GateConfig, orbit: tuple[int, ...]) -> GateConfig:
    states = list(config.states)
    for j in orbit:
        states[j] = not states[j]
    return GateConfig(config.grid, tuple(states))


def pattern_for_category(catalog: Catalog, index: int) -> GateConfig:
    if not catalog.entries:
        raise NoPatternError(
            f"catalog for {catalog.grid} ({catalog.symmetry.value}) has no single-loop patterns"
        )
    if index < 0:
        raise ValueError("pattern index must be non-negative")
    return catalog.config(index % len(catalog.entries))


def serialize_catalog(catalog: Catalog) -> str:
    lines = [f"{CATALOG_HEADER} {catalog.grid.width} {catalog.grid.height} {catalog.symmetry.value}"]
    lines.extend(catalog.entries)
    return "\n".join(lines) + "\n"


def deserialize_catalog(text: str) -> Catalog:
    if not text.endswith("\n"):
        raise KolamParseError("catalog file must end with a newline", text.count("\n") + 1)
    lines = text[:-1].split("\n")
    parts = parse_header(lines[0], 1, CATALOG_HEADER, extra=1)
    grid = GridSpec(int(parts[1]), int(parts[2]))
    try:
        symmetry = SymmetryGroup.parse(parts[3])
    except ValueError as exc:
        raise KolamParseError(str(exc), 1) from None
    entries = []
    in_entries = False
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("#") and not in_entries:
            continue
        in_entries = True
        if len(line) != grid.site_count:
            raise KolamParseError(
                f"expected {grid.site_count} bits for a {grid} grid, got {len(line)}", lineno
            )
        for col, ch in enumerate(line, start=1):
            if ch not in "01":
                raise KolamParseError(f"illegal character {ch!r} in catalog entry", lineno, col)
        entries.append(line)
    if entries != sorted(set(entries)):
        raise KolamParseError("catalog entries must be sorted and unique", 2)
    return Catalog(grid, symmetry, tuple(entries))
