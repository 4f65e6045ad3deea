"""Smooth path geometry, parallel offsets and enclosed-region extraction.

Every bounce becomes a quarter arc of radius 1/sqrt(2) around the dot on
its concave side, every run of straight crossings becomes one diagonal
segment.  Arcs touch the incoming and outgoing unit segments at their
midpoints, so joints are tangent-continuous by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from .errors import OffsetTooLargeError, RadiusBoundError
from .grid import GridSpec
from .trace import Action, GateConfig, LoopSet, action_at

ARC_RADIUS = 1.0 / math.sqrt(2.0)
MAX_OFFSET = (2.0 - math.sqrt(2.0)) / 2.0
JOINT_TOL = 1e-9

Point = tuple[float, float]


@dataclass(frozen=True)
class Segment:
    start: Point
    end: Point

    @property
    def direction(self) -> Point:
        dx, dy = self.end[0] - self.start[0], self.end[1] - self.start[1]
        n = math.hypot(dx, dy)
        return dx / n, dy / n

    def start_tangent(self) -> Point:
        return self.direction

    def end_tangent(self) -> Point:
        return self.direction

    def point_at(self, t: float) -> Point:
        return (
            self.start[0] + t * (self.end[0] - self.start[0]),
            self.start[1] + t * (self.end[1] - self.start[1]),
        )

    @property
    def is_diagonal(self) -> bool:
        dx, dy = self.end[0] - self.start[0], self.end[1] - self.start[1]
        return dx != 0 and abs(dx) == abs(dy)


@dataclass(frozen=True)
class Arc:
    center: Point
    radius: float
    start_angle: float
    end_angle: float  # start_angle +/- sweep, not reduced mod 2*pi
    ccw: bool

    @property
    def sweep(self) -> float:
        return self.end_angle - self.start_angle

    def point_at(self, t: float) -> Point:
        a = self.start_angle + t * self.sweep
        return self.center[0] + self.radius * math.cos(a), self.center[1] + self.radius * math.sin(a)

    @property
    def start(self) -> Point:
        return self.point_at(0.0)

    @property
    def end(self) -> Point:
        return self.point_at(1.0)

    def _tangent(self, angle: float) -> Point:
        if self.ccw:
            return -math.sin(angle), math.cos(angle)
        return math.sin(angle), -math.cos(angle)

    def start_tangent(self) -> Point:
        return self._tangent(self.start_angle)

    def end_tangent(self) -> Point:
        return self._tangent(self.end_angle)


Piece = Union[Segment, Arc]


@dataclass(frozen=True)
class ClosedPath:
    pieces: tuple[Piece, ...]

    def __iter__(self) -> Iterator[Piece]:
        return iter(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def junctions(self) -> Iterator[tuple[Piece, Piece]]:
        n = len(self.pieces)
        for k in range(n):
            yield self.pieces[k], self.pieces[(k + 1) % n]

    def max_gap(self) -> float:
        return max((_dist(a.end, b.start) for a, b in self.junctions()), default=0.0)

    def max_tangent_mismatch(self) -> float:
        worst = 0.0
        for a, b in self.junctions():
            ta, tb = a.end_tangent(), b.start_tangent()
            cross = ta[0] * tb[1] - ta[1] * tb[0]
            dot = ta[0] * tb[0] + ta[1] * tb[1]
            worst = max(worst, abs(math.atan2(cross, dot)))
        return worst

    def total_turning(self) -> float:
        """Sum of arc sweeps plus the turn at every joint."""
        total = sum(p.sweep for p in self.pieces if isinstance(p, Arc))
        for a, b in self.junctions():
            ta, tb = a.end_tangent(), b.start_tangent()
            total += math.atan2(ta[0] * tb[1] - ta[1] * tb[0], ta[0] * tb[0] + ta[1] * tb[1])
        return total

    @property
    def arcs(self) -> list[Arc]:
        return [p for p in self.pieces if isinstance(p, Arc)]

    @property
    def segments(self) -> list[Segment]:
        return [p for p in self.pieces if isinstance(p, Segment)]


@dataclass(frozen=True)
class RenderParams:
    dot_radius: float = 0.35
    stroke_width: float = 0.06
    half_gap: float = 0.12  # double-line offset from the centerline
    pixels_per_unit: float = 40.0
    margin: float = 1.0

    def __post_init__(self) -> None:
        if self.dot_radius <= 0 or self.stroke_width <= 0 or self.half_gap < 0:
            raise ValueError("render sizes must be positive")
        if self.pixels_per_unit <= 0 or self.margin < 0:
            raise ValueError("pixels per unit must be positive and margin non-negative")
        if 2 * self.half_gap >= 2 - math.sqrt(2):
            raise OffsetTooLargeError(
                f"double-line half gap {self.half_gap} leaves no corridor (limit {MAX_OFFSET:.6f})"
            )
        check_dot_radius(self.dot_radius, self.stroke_width, self.half_gap)

    @property
    def max_dot_radius(self) -> float:
        return max_dot_radius(self.stroke_width, self.half_gap)


def max_dot_radius(stroke_width: float, half_gap: float) -> float:
    """Exclusive ceiling on dot radius that keeps every line clear of the dots."""
    return ARC_RADIUS - half_gap - stroke_width / 2


def check_dot_radius(radius: float, stroke_width: float, half_gap: float) -> None:
    ceiling = max_dot_radius(stroke_width, half_gap)
    if not radius < ceiling:
        raise RadiusBoundError(
            f"dot radius {radius} must stay below 1/sqrt(2) - half gap - stroke/2 = {ceiling:.6f}"
        )


def _dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _half(v: tuple[int, int], d: tuple[int, int], sign: int) -> Point:
    return v[0] + sign * d[0] / 2, v[1] + sign * d[1] / 2


def _quarter_arc(center: Point, start: Point, ccw: bool, radius: float = ARC_RADIUS) -> Arc:
    a0 = math.atan2(start[1] - center[1], start[0] - center[0])
    return Arc(center, radius, a0, a0 + (math.pi / 2 if ccw else -math.pi / 2), ccw)


def smooth_path(loops: LoopSet, grid: GridSpec | None = None) -> list[ClosedPath]:
    """One closed path per loop, in loop order."""
    paths = []
    for loop in loops.loops:
        n = len(loop)
        first = next(k for k, e in enumerate(loop) if e.action is not Action.PASS)
        events = loop[first:] + loop[:first]
        pieces: list[Piece] = []
        k = 0
        while k < n:
            e = events[k]
            d_in, d_out = e.incoming, e.outgoing
            if e.action is Action.PASS:
                run_start = _half(e.vertex, d_in, -1)
                while k < n and events[k].action is Action.PASS:
                    k += 1
                last = events[k - 1]
                pieces.append(Segment(run_start, _half(last.vertex, last.outgoing, 1)))
                continue
            center = (
                e.vertex[0] + (d_out[0] - d_in[0]) / 2,
                e.vertex[1] + (d_out[1] - d_in[1]) / 2,
            )
            ccw = d_in[0] * d_out[1] - d_in[1] * d_out[0] > 0
            pieces.append(_quarter_arc(center, _half(e.vertex, d_in, -1), ccw))
            k += 1
        paths.append(ClosedPath(tuple(pieces)))
    return paths


def offset_piece(piece: Piece, delta: float) -> Piece:
    """Shift a piece sideways; positive delta moves to the left of travel."""
    if isinstance(piece, Segment):
        tx, ty = piece.direction
        nx, ny = -ty * delta, tx * delta
        return Segment(
            (piece.start[0] + nx, piece.start[1] + ny), (piece.end[0] + nx, piece.end[1] + ny)
        )
    radius = piece.radius - delta if piece.ccw else piece.radius + delta
    return Arc(piece.center, radius, piece.start_angle, piece.end_angle, piece.ccw)


def offset_path(path: ClosedPath, delta: float) -> ClosedPath:
    if not (abs(delta) < MAX_OFFSET and abs(delta) < ARC_RADIUS):
        raise OffsetTooLargeError(
            f"offset {delta} out of range; |delta| must stay below {MAX_OFFSET:.6f}"
        )
    if delta == 0:
        return path
    return ClosedPath(tuple(offset_piece(p, delta) for p in path.pieces))


# ---------------------------------------------------------------------------
# distances


def distance_to_piece(piece: Piece, point: Point) -> float:
    return float(distance_field(piece, np.array([point[0]]), np.array([point[1]]))[0])


def distance_field(piece: Piece, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Euclidean distance from each (x, y) to the piece, vectorised."""
    if isinstance(piece, Segment):
        (x0, y0), (x1, y1) = piece.start, piece.end
        dx, dy = x1 - x0, y1 - y0
        t = np.clip(((xs - x0) * dx + (ys - y0) * dy) / (dx * dx + dy * dy), 0.0, 1.0)
        return np.hypot(xs - (x0 + t * dx), ys - (y0 + t * dy))
    cx, cy = piece.center
    ang = np.arctan2(ys - cy, xs - cx)
    sweep = abs(piece.sweep)
    if piece.ccw:
        rel = np.mod(ang - piece.start_angle, 2 * math.pi)
    else:
        rel = np.mod(piece.start_angle - ang, 2 * math.pi)
    inside = rel <= sweep
    radial = np.abs(np.hypot(xs - cx, ys - cy) - piece.radius)
    (sx, sy), (ex, ey) = piece.start, piece.end
    ends = np.minimum(np.hypot(xs - sx, ys - sy), np.hypot(xs - ex, ys - ey))
    return np.where(inside, radial, ends)


def piece_bounds(piece: Piece) -> tuple[float, float, float, float]:
    """Axis-aligned bounding box (xmin, ymin, xmax, ymax), conservative for arcs."""
    if isinstance(piece, Segment):
        xs = (piece.start[0], piece.end[0])
        ys = (piece.start[1], piece.end[1])
        return min(xs), min(ys), max(xs), max(ys)
    cx, cy = piece.center
    r = piece.radius
    return cx - r, cy - r, cx + r, cy + r


def clearance(paths: list[ClosedPath], grid: GridSpec) -> float:
    """Minimum distance from any path piece to any dot center."""
    if not paths:
        return math.inf
    dots = np.array(grid.dots, dtype=float)
    best = math.inf
    for path in paths:
        for piece in path.pieces:
            best = min(best, float(distance_field(piece, dots[:, 0], dots[:, 1]).min()))
    return best


# ---------------------------------------------------------------------------
# faces


@dataclass(frozen=True)
class AtomicFace:
    center: tuple[int, int]
    kind: str  # "dot", "corridor" or "wall"


@dataclass(frozen=True)
class Region:
    faces: tuple[int, ...]  # atomic face indices, ascending
    boundary: tuple[ClosedPath, ...]  # outer boundary first, then holes


@dataclass(frozen=True)
class FaceSet:
    grid: GridSpec
    atomic: tuple[AtomicFace, ...]
    region_of: tuple[int, ...]  # atomic face index -> region id (ids follow region order)
    exterior: int  # region id of the merged wall faces
    interior: tuple[Region, ...]
    interior_ids: tuple[int, ...]  # region id of each interior region

    def region_kind(self, k: int) -> str:
        """'dot' for a lone dot face, 'corridor' otherwise."""
        faces = self.interior[k].faces
        return "dot" if self.atomic[faces[0]].kind == "dot" else "corridor"

    @property
    def index(self) -> dict[tuple[int, int], int]:
        return {f.center: k for k, f in enumerate(self.atomic)}


def atomic_faces(grid: GridSpec) -> tuple[AtomicFace, ...]:
    """Dot faces, then interior corridor faces, then wall faces; each block by (y, x)."""
    cw, ch = grid.canvas_width, grid.canvas_height
    dots = [AtomicFace(p, "dot") for p in grid.dots]
    corridors, walls = [], []
    for y in range(0, ch + 1, 2):
        for x in range(0, cw + 1, 2):
            if grid.is_wall(x, y):
                walls.append(AtomicFace((x, y), "wall"))
            else:
                corridors.append(AtomicFace((x, y), "corridor"))
    return tuple(dots + corridors + walls)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _rot_ccw(u: tuple[int, int]) -> tuple[int, int]:
    return -u[1], u[0]


def _rot_cw(u: tuple[int, int]) -> tuple[int, int]:
    return u[1], -u[0]


def _ccw_half(u):  # half-segment direction on the counter-clockwise side of face direction u
    return u[0] - u[1], u[0] + u[1]


def _cw_half(u):
    return u[0] + u[1], u[1] - u[0]


_AXES = ((1, 0), (0, 1), (-1, 0), (0, -1))


def _vertex_kind(config: GateConfig, x: int, y: int) -> tuple[str, list[tuple[int, int]]]:
    """('pass', []) or ('bounce', directions of the wrapped dots)."""
    grid = config.grid
    if grid.is_wall(x, y):
        inward = [
            u for u in _AXES
            if grid.contains(x + u[0], y + u[1]) and (x + u[0]) % 2 == 1 and (y + u[1]) % 2 == 1
        ]
        return "bounce", inward
    flip_x, flip_y = action_at(config, x, y)
    if flip_y:  # closed V-site: dots above and below
        return "bounce", [(0, 1), (0, -1)]
    if flip_x:
        return "bounce", [(1, 0), (-1, 0)]
    return "pass", []


@dataclass(frozen=True)
class _Edge:
    start: tuple[int, int]  # doubled coordinates
    end: tuple[int, int]
    start_face: tuple[int, int]
    end_face: tuple[int, int]
    piece: Piece


def _boundary_edges(config: GateConfig) -> list[_Edge]:
    """Directed boundary pieces of every atomic face, face on the left."""
    grid = config.grid
    edges = []
    for x, y in grid.strand_vertices():
        kind, dot_dirs = _vertex_kind(config, x, y)
        v2 = (2 * x, 2 * y)
        if kind == "pass":
            for u in _AXES:
                face = (x + u[0], y + u[1])
                a, b = _ccw_half(u), _cw_half(u)
                ma = (2 * x + a[0], 2 * y + a[1])
                mb = (2 * x + b[0], 2 * y + b[1])
                edges.append(_Edge(ma, v2, face, face, Segment(_p(ma), _p(v2))))
                edges.append(_Edge(v2, mb, face, face, Segment(_p(v2), _p(mb))))
            continue
        for u in dot_dirs:
            dot = (x + u[0], y + u[1])
            a, b = _ccw_half(u), _cw_half(u)
            ma = (2 * x + a[0], 2 * y + a[1])
            mb = (2 * x + b[0], 2 * y + b[1])
            right = _rot_cw(u)
            left = _rot_ccw(u)
            edges.append(_Edge(ma, mb, dot, dot, _quarter_arc(dot, _p(ma), ccw=True)))
            edges.append(
                _Edge(
                    mb,
                    ma,
                    (x + right[0], y + right[1]),
                    (x + left[0], y + left[1]),
                    _quarter_arc(dot, _p(mb), ccw=False),
                )
            )
    return edges


def _p(q: tuple[int, int]) -> Point:
    return q[0] / 2, q[1] / 2


def faces(config: GateConfig) -> FaceSet:
    grid = config.grid
    atomic = atomic_faces(grid)
    index = {f.center: k for k, f in enumerate(atomic)}
    uf = _UnionFind(len(atomic))
    for x, y in grid.strand_vertices():
        kind, dot_dirs = _vertex_kind(config, x, y)
        if kind == "pass":
            continue
        # the two faces flanking the wrapped dots are joined by a channel
        flank = _rot_ccw(dot_dirs[0])
        a = (x + flank[0], y + flank[1])
        b = (x - flank[0], y - flank[1])
        if a in index and b in index:
            uf.union(index[a], index[b])

    roots = [uf.find(k) for k in range(len(atomic))]
    order = sorted(set(roots))  # roots are minimal indices, so this is smallest-member order
    region_id = {r: n for n, r in enumerate(order)}
    region_of = tuple(region_id[r] for r in roots)
    wall_index = next(k for k, f in enumerate(atomic) if f.kind == "wall")
    exterior = region_of[wall_index]

    edges = _boundary_edges(config)
    by_start = {(e.start, e.start_face): e for e in edges}

    members: dict[int, list[int]] = {}
    for k, rid in enumerate(region_of):
        members.setdefault(rid, []).append(k)

    interior = []
    interior_ids = []
    for rid in range(len(order)):
        if rid == exterior:
            continue
        cells = {atomic[k].center for k in members[rid]}
        own = sorted(
            (e for e in edges if e.start_face in cells),
            key=lambda e: (e.start[1], e.start[0], e.start_face[1], e.start_face[0]),
        )
        used: set[tuple] = set()
        cycles = []
        for first in own:
            key = (first.start, first.start_face)
            if key in used:
                continue
            pieces = []
            edge = first
            while True:
                used.add((edge.start, edge.start_face))
                pieces.append(edge.piece)
                edge = by_start[(edge.end, edge.end_face)]
                if edge is first:
                    break
            cycles.append(ClosedPath(tuple(pieces)))
        cycles.sort(key=lambda c: -abs(_signed_area(c)))
        interior.append(Region(tuple(members[rid]), tuple(cycles)))
        interior_ids.append(rid)
    return FaceSet(grid, atomic, region_of, exterior, tuple(interior), tuple(interior_ids))


def _signed_area(path: ClosedPath, samples: int = 16) -> float:
    pts = []
    for piece in path.pieces:
        n = samples if isinstance(piece, Arc) else 1
        pts.extend(piece.point_at(t / n) for t in range(n))
    area = 0.0
    for k in range(len(pts)):
        x0, y0 = pts[k]
        x1, y1 = pts[(k + 1) % len(pts)]
        area += x0 * y1 - x1 * y0
    return area / 2


def enclosure_check(config: GateConfig, paths: list[ClosedPath] | None = None, raster: bool = False,
                    stroke_width: float = 0.06) -> dict[tuple[int, int], bool]:
    """Per-dot enclosure verdict.

    A dot is enclosed iff its dot face is an interior region.  With
    ``raster=True`` the verdict also requires that a flood fill from the
    canvas border over the stroked paths never reaches the dot center.
    """
    fs = faces(config)
    result = {}
    for k, face in enumerate(fs.atomic):
        if face.kind == "dot":
            result[face.center] = fs.region_of[k] != fs.exterior
    if raster:
        from .raster import raster_regions

        if paths is None:
            from .trace import trace

            paths = smooth_path(trace(config), config.grid)
        rr = raster_regions(config.grid, paths, stroke_width)
        for center in result:
            result[center] = result[center] and not rr.is_exterior(center)
    return result
