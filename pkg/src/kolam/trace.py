"""Mirror-curve tracing over a gate configuration.

A strand travels diagonally between strand vertices.  Walls always reflect
it; a CLOSED gate reflects it (the line wraps the neighbouring dot) and an
OPEN gate lets it cross straight through.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import KolamParseError
from .grid import GridSpec

Vec = tuple[int, int]
State = tuple[int, int, int, int]  # vertex x, y and outgoing direction dx, dy

DIRECTIONS: tuple[Vec, ...] = ((1, 1), (-1, 1), (-1, -1), (1, -1))


class Action(str, Enum):
    PASS = "pass"
    BOUNCE_X = "bounce-x"
    BOUNCE_Y = "bounce-y"


@dataclass(frozen=True)
class GateConfig:
    grid: GridSpec
    states: tuple[bool, ...]  # True = CLOSED

    def __post_init__(self) -> None:
        if len(self.states) != self.grid.site_count:
            raise ValueError(
                f"{self.grid} grid has {self.grid.site_count} gate sites, got {len(self.states)} states"
            )

    @classmethod
    def all_closed(cls, grid: GridSpec) -> GateConfig:
        return cls(grid, (True,) * grid.site_count)

    @classmethod
    def all_open(cls, grid: GridSpec) -> GateConfig:
        return cls(grid, (False,) * grid.site_count)

    @classmethod
    def from_bits(cls, grid: GridSpec, bits: str) -> GateConfig:
        return cls(grid, tuple(c == "1" for c in bits))

    @classmethod
    def from_int(cls, grid: GridSpec, value: int) -> GateConfig:
        """Bit k of ``value`` is the state of site k."""
        return cls(grid, tuple(bool(value >> k & 1) for k in range(grid.site_count)))

    @property
    def bits(self) -> str:
        return "".join("1" if s else "0" for s in self.states)

    def is_closed(self, x: int, y: int) -> bool:
        return self.states[self.grid.site_index[(x, y)]]

    @property
    def open_fraction(self) -> float:
        if not self.states:
            return 0.0
        return self.states.count(False) / len(self.states)


@dataclass(frozen=True)
class Event:
    vertex: Vec
    incoming: Vec
    action: Action

    @property
    def outgoing(self) -> Vec:
        dx, dy = self.incoming
        if self.action is Action.BOUNCE_X:
            return -dx, dy
        if self.action is Action.BOUNCE_Y:
            return dx, -dy
        return dx, dy

    @property
    def key(self) -> State:
        return (*self.vertex, *self.incoming)


Loop = tuple[Event, ...]


@dataclass(frozen=True)
class LoopSet:
    grid: GridSpec
    loops: tuple[Loop, ...]

    def __len__(self) -> int:
        return len(self.loops)

    def segments(self) -> list[tuple[Vec, Vec]]:
        """Every traversed unit segment, as (from, to) vertex pairs."""
        out = []
        for loop in self.loops:
            for event in loop:
                x, y = event.vertex
                dx, dy = event.incoming
                out.append(((x - dx, y - dy), (x, y)))
        return out


def action_at(config: GateConfig, x: int, y: int) -> tuple[bool, bool]:
    """(flip dx, flip dy) applied to a strand arriving at vertex (x, y)."""
    grid = config.grid
    flip_x = x == 0 or x == grid.canvas_width
    flip_y = y == 0 or y == grid.canvas_height
    if flip_x or flip_y:
        return flip_x, flip_y
    if not config.is_closed(x, y):
        return False, False
    if x % 2 == 1:  # V-site
        return False, True
    return True, False


def _action_table(config: GateConfig) -> dict[Vec, tuple[bool, bool]]:
    return {v: action_at(config, *v) for v in config.grid.strand_vertices()}


def _step(table: dict[Vec, tuple[bool, bool]], state: State) -> State:
    x, y, dx, dy = state
    nx, ny = x + dx, y + dy
    fx, fy = table[(nx, ny)]
    return nx, ny, -dx if fx else dx, -dy if fy else dy


def successor(config: GateConfig, state: State) -> State:
    x, y, dx, dy = state
    nx, ny = x + dx, y + dy
    fx, fy = action_at(config, nx, ny)
    return nx, ny, -dx if fx else dx, -dy if fy else dy


def predecessor(config: GateConfig, state: State) -> State:
    x, y, dx, dy = state
    fx, fy = action_at(config, x, y)
    ix, iy = (-dx if fx else dx), (-dy if fy else dy)
    return x - ix, y - iy, ix, iy


def all_states(grid: GridSpec) -> list[State]:
    """Every (vertex, outgoing direction) pair whose step stays on the canvas."""
    return [
        (x, y, dx, dy)
        for x, y in grid.strand_vertices()
        for dx, dy in DIRECTIONS
        if grid.contains(x + dx, y + dy)
    ]


def _event(state_before: State, state_after: State) -> Event:
    _, _, dx, dy = state_before
    x, y, ox, oy = state_after
    if ox != dx:
        action = Action.BOUNCE_X
    elif oy != dy:
        action = Action.BOUNCE_Y
    else:
        action = Action.PASS
    return Event((x, y), (dx, dy), action)


def _reverse(loop: list[Event]) -> list[Event]:
    # Reflections are involutions, so reversing keeps each vertex's action.
    rev = []
    for event in reversed(loop):
        ox, oy = event.outgoing
        rev.append(Event(event.vertex, (-ox, -oy), event.action))
    return rev


def _canonical(loop: list[Event]) -> Loop:
    candidates = []
    for orientation in (loop, _reverse(loop)):
        start = min(range(len(orientation)), key=lambda k: orientation[k].key)
        candidates.append(tuple(orientation[start:] + orientation[:start]))
    return min(candidates, key=lambda c: c[0].key)


def trace(config: GateConfig) -> LoopSet:
    """Decompose the configuration into closed loops.

    Loops are normalised to start at their lexicographically smallest
    (x, y, dx, dy) event over both orientations and sorted by that key.
    """
    table = _action_table(config)
    visited: set[State] = set()
    loops = []
    for start in all_states(config.grid):
        if start in visited:
            continue
        events = []
        state = start
        while True:
            visited.add(state)
            x, y, dx, dy = state
            visited.add((x + dx, y + dy, -dx, -dy))
            nxt = _step(table, state)
            events.append(_event(state, nxt))
            state = nxt
            if state == start:
                break
        loops.append(_canonical(events))
    loops.sort(key=lambda lp: lp[0].key)
    return LoopSet(config.grid, tuple(loops))


def loop_count(config: GateConfig) -> int:
    table = _action_table(config)
    visited: set[State] = set()
    count = 0
    for start in all_states(config.grid):
        if start in visited:
            continue
        count += 1
        state = start
        while True:
            visited.add(state)
            x, y, dx, dy = state
            visited.add((x + dx, y + dy, -dx, -dy))
            state = _step(table, state)
            if state == start:
                break
    return count


def toggle(config: GateConfig, index: int) -> GateConfig:
    if not 0 <= index < len(config.states):
        raise IndexError(f"site index {index} out of range for {len(config.states)} sites")
    states = list(config.states)
    states[index] = not states[index]
    return GateConfig(config.grid, tuple(states))


def toggle_many(config: GateConfig, indices: Iterable[int]) -> GateConfig:
    states = list(config.states)
    for k in indices:
        states[k] = not states[k]
    return GateConfig(config.grid, tuple(states))


GATE_HEADER = "kolam-gates"


def serialize(config: GateConfig) -> str:
    grid = config.grid
    return f"{GATE_HEADER} {grid.width} {grid.height}\n{config.bits}\n"


def parse_header(line: str, lineno: int, magic: str, extra: int = 0) -> list[str]:
    parts = line.split(" ")
    if len(parts) != 3 + extra or parts[0] != magic:
        raise KolamParseError(f"expected header '{magic} W H{' ...' * extra}', got {line!r}", lineno)
    for p in parts[1:3]:
        if not p.isdigit() or int(p) < 1:
            raise KolamParseError(f"bad grid dimension {p!r} in header", lineno)
    return parts


def deserialize(text: str) -> GateConfig:
    lines = text.split("\n")
    if not text.endswith("\n"):
        raise KolamParseError("gate file must end with a newline", max(len(lines), 1))
    lines = lines[:-1]
    if not lines:
        raise KolamParseError("empty gate file", 1)
    parts = parse_header(lines[0], 1, GATE_HEADER)
    grid = GridSpec(int(parts[1]), int(parts[2]))
    rest = list(enumerate(lines[1:], start=2))
    while rest and rest[0][1].startswith("#"):
        rest.pop(0)
    if not rest:
        raise KolamParseError("missing bit line", len(lines) + 1)
    if len(rest) > 1:
        raise KolamParseError("unexpected content after bit line", rest[1][0])
    lineno, bits = rest[0]
    for col, ch in enumerate(bits, start=1):
        if ch not in "01":
            raise KolamParseError(f"illegal character {ch!r} in bit line", lineno, col)
    if len(bits) != grid.site_count:
        raise KolamParseError(
            f"expected {grid.site_count} bits for a {grid} grid, got {len(bits)}", lineno
        )
    return GateConfig.from_bits(grid, bits)
