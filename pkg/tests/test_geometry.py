import math
import random

import pytest

from kolam.errors import OffsetTooLargeError, RadiusBoundError
from kolam.geometry import (
    ARC_RADIUS, MAX_OFFSET, Arc, RenderParams, Segment, clearance, distance_to_piece,
    enclosure_check, faces, offset_path, smooth_path,
)
from kolam.grid import make_grid
from kolam.trace import Action, GateConfig, trace
from oracles import random_config


def paths_of(config):
    return smooth_path(trace(config), config.grid)


def test_lone_dot_is_a_circle():
    (path,) = paths_of(GateConfig(make_grid(1, 1), ()))
    assert len(path.arcs) == 4 and not path.segments
    for arc in path.arcs:
        assert arc.center == (1.0, 1.0)
        assert abs(arc.radius - 1 / math.sqrt(2)) < 1e-12
    assert abs(abs(path.total_turning()) - 2 * math.pi) < 1e-9


def test_clearance_is_exactly_arc_radius():
    rng = random.Random(3)
    for w, h in [(2, 2), (3, 3), (4, 3), (5, 5)]:
        for _ in range(5):
            c = random_config(make_grid(w, h), rng)
            assert abs(clearance(paths_of(c), c.grid) - ARC_RADIUS) < 1e-12


def test_piece_counts_match_events():
    rng = random.Random(4)
    c = random_config(make_grid(4, 4), rng)
    loops = trace(c)
    paths = smooth_path(loops, c.grid)
    for loop, path in zip(loops.loops, paths):
        bounces = sum(e.action is not Action.PASS for e in loop)
        assert len(path.arcs) == bounces
        assert all(s.is_diagonal for s in path.segments)


def test_g1_and_total_turning_on_random_4x4():
    rng = random.Random(8)
    for _ in range(20):
        for path in paths_of(random_config(make_grid(4, 4), rng)):
            assert path.max_gap() < 1e-9
            assert path.max_tangent_mismatch() < 1e-9
            turns = path.total_turning() / (2 * math.pi)
            assert abs(turns - round(turns)) < 1e-9


def test_offset_circle():
    (path,) = paths_of(GateConfig(make_grid(1, 1), ()))
    radii = {round(p.radius, 12) for p in offset_path(path, 0.12).arcs}
    other = {round(p.radius, 12) for p in offset_path(path, -0.12).arcs}
    assert radii | other == {round(ARC_RADIUS - 0.12, 12), round(ARC_RADIUS + 0.12, 12)}
    assert len(radii) == len(other) == 1


def test_offset_zero_is_identity():
    (path,) = paths_of(GateConfig.all_open(make_grid(2, 3)))[:1]
    assert offset_path(path, 0.0) == path


def test_offset_bound():
    (path,) = paths_of(GateConfig(make_grid(1, 1), ()))
    with pytest.raises(OffsetTooLargeError):
        offset_path(path, MAX_OFFSET)
    with pytest.raises(OffsetTooLargeError):
        offset_path(path, -0.3)
    offset_path(path, MAX_OFFSET - 1e-6)


def test_render_params_bounds():
    RenderParams()
    with pytest.raises(RadiusBoundError):
        RenderParams(dot_radius=0.56)
    with pytest.raises(OffsetTooLargeError):
        RenderParams(half_gap=0.3)


def test_distance_to_piece():
    seg = Segment((0.0, 0.0), (1.0, 1.0))
    assert distance_to_piece(seg, (1.0, 0.0)) == pytest.approx(math.sqrt(0.5))
    arc = Arc((0.0, 0.0), 1.0, 0.0, math.pi / 2, True)
    assert distance_to_piece(arc, (0.0, 2.0)) == pytest.approx(1.0)
    assert distance_to_piece(arc, (0.0, -2.0)) == pytest.approx(math.hypot(1, 2))


def _interior_counts(config):
    fs = faces(config)
    dots = sum(fs.region_kind(k) == "dot" for k in range(len(fs.interior)))
    return len(fs.interior), dots


def test_faces_all_closed_3x3():
    assert _interior_counts(GateConfig.all_closed(make_grid(3, 3))) == (9, 9)


def test_faces_all_open_2x2():
    fs = faces(GateConfig.all_open(make_grid(2, 2)))
    assert len(fs.interior) == 5
    corridors = [r for k, r in enumerate(fs.interior) if fs.region_kind(k) == "corridor"]
    assert [fs.atomic[f].center for r in corridors for f in r.faces] == [(2, 2)]


def test_every_dot_is_enclosed():
    rng = random.Random(12)
    for _ in range(30):
        c = random_config(make_grid(rng.randint(1, 5), rng.randint(1, 5)), rng)
        assert all(enclosure_check(c).values())


def test_enclosure_raster_cross_check():
    rng = random.Random(13)
    for _ in range(5):
        c = random_config(make_grid(3, 3), rng)
        assert all(enclosure_check(c, raster=True).values())
    assert enclosure_check(GateConfig(make_grid(1, 1), ()), raster=True) == {(1, 1): True}


def test_region_boundaries_are_closed():
    # corners are allowed here: a corridor boundary turns where two strands cross
    rng = random.Random(14)
    for _ in range(10):
        fs = faces(random_config(make_grid(4, 4), rng))
        for region in fs.interior:
            for path in region.boundary:
                assert path.max_gap() < 1e-9


def _winding(path, point, n=64):
    pts = [p.point_at(t / n) for p in path.pieces for t in range(n)]
    total = 0.0
    for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
        a0 = math.atan2(y0 - point[1], x0 - point[0])
        a1 = math.atan2(y1 - point[1], x1 - point[0])
        total += (a1 - a0 + math.pi) % (2 * math.pi) - math.pi
    return round(total / (2 * math.pi))


def test_region_outer_boundary_winds_around_its_faces():
    rng = random.Random(15)
    for _ in range(5):
        fs = faces(random_config(make_grid(3, 3), rng))
        for region in fs.interior:
            for k in region.faces:
                assert abs(_winding(region.boundary[0], fs.atomic[k].center)) == 1
