import math
import random

import pytest

from kolam.geometry import ARC_RADIUS, RenderParams
from kolam.grid import Element, SymmetryGroup, make_grid, site_permutation
from kolam.search import SearchRequest, find_single_loop
from kolam.trace import GateConfig
from kolam.validate import detect_symmetry, validate
from oracles import random_config, union_find_loop_count


def _verdicts(report):
    return [r.passed for r in report.rules]


def test_all_closed_3x3():
    report = validate(GateConfig.all_closed(make_grid(3, 3)))
    assert _verdicts(report) == [True, False, True, True, True]
    assert report.loop_count == 9
    assert report.symmetry is SymmetryGroup.D4
    assert not report.passed


def test_single_dot_passes_everything():
    report = validate(GateConfig(make_grid(1, 1), ()))
    assert report.passed
    assert report.symmetry is SymmetryGroup.D4


def test_rot180_search_output_passes():
    for seed in range(5):
        c = find_single_loop(SearchRequest(make_grid(3, 3), SymmetryGroup.ROT180, seed=seed))
        report = validate(c)
        assert report.passed, report.format_text()
        assert abs(report.clearance - ARC_RADIUS) < 1e-9


def test_rule2_agrees_with_oracle():
    for w, h in [(2, 2), (3, 3)]:
        g = make_grid(w, h)
        for v in range(0, 1 << g.site_count, 7):  # full geometry is slower; stride through
            c = GateConfig.from_int(g, v)
            assert validate(c).loop_count == union_find_loop_count(c)


def test_detect_d4_on_square_all_closed():
    assert detect_symmetry(GateConfig.all_closed(make_grid(4, 4))) is SymmetryGroup.D4


def test_detect_d2_on_rectangle():
    assert detect_symmetry(GateConfig.all_closed(make_grid(2, 3))) is SymmetryGroup.D2


def test_detect_h_mirror_only():
    rng = random.Random(2)
    g = make_grid(4, 3)
    found = 0
    for _ in range(200):
        c = random_config(g, rng)
        perm = site_permutation(g, Element.H_MIRROR)
        states = list(c.states)
        for k in range(len(states)):
            states[perm[k]] = states[min(k, perm[k])]
        c = GateConfig(g, tuple(states))
        group = detect_symmetry(c)
        assert group.contains(SymmetryGroup.H_MIRROR)
        if group is SymmetryGroup.H_MIRROR:
            found += 1
    assert found > 0


def test_rule3_required_symmetry():
    c = find_single_loop(SearchRequest(make_grid(4, 4), SymmetryGroup.NONE, seed=0))
    report = validate(c, required_symmetry=SymmetryGroup.NONE)
    assert report.rules[2].passed
    report = validate(c, required_symmetry=SymmetryGroup.D4)
    assert report.rules[2].passed == (report.symmetry is SymmetryGroup.D4)


def test_rule1_uses_params():
    c = GateConfig(make_grid(1, 1), ())
    tight = RenderParams(dot_radius=0.55, stroke_width=0.01, half_gap=0.01)
    assert validate(c, tight).rules[0].passed
    assert validate(c).required_clearance == pytest.approx(0.35 + 0.03)


def test_report_formats():
    report = validate(GateConfig.all_closed(make_grid(3, 3)))
    text = report.format_text().splitlines()
    assert text[0].startswith("rule-1 PASS obstacle")
    assert text[1] == "rule-2 FAIL continuity loops=9"
    assert text[-1] == "overall FAIL"
    machine = dict(line.split("=", 1) for line in report.format_machine().splitlines())
    assert machine["loop_count"] == "9"
    assert machine["rule2"] == "fail"
    assert machine["symmetry"] == "d4"
    assert math.isclose(float(machine["clearance"]), ARC_RADIUS, abs_tol=1e-12)
