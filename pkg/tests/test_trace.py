import random

import pytest
from hypothesis import given, settings, strategies as st

from kolam.errors import KolamParseError
from kolam.grid import make_grid
from kolam.trace import (
    Action, GateConfig, all_states, deserialize, loop_count, predecessor, serialize, successor,
    toggle, toggle_many, trace,
)
from oracles import canvas_segments, random_config, union_find_loop_count


def test_single_dot_is_one_loop_of_four_bounces():
    loops = trace(GateConfig(make_grid(1, 1), ()))
    assert len(loops) == 1
    (loop,) = loops.loops
    assert len(loop) == 4
    assert all(e.action is not Action.PASS for e in loop)


def test_all_closed_3x3_rings_every_dot():
    assert loop_count(GateConfig.all_closed(make_grid(3, 3))) == 9


def test_all_open_2x2_two_loops_of_eight():
    g = make_grid(2, 2)
    loops = trace(GateConfig.all_open(g))
    assert [len(lp) for lp in loops.loops] == [8, 8]
    assert union_find_loop_count(GateConfig.all_open(g)) == 2
    assert {frozenset(s) for s in loops.segments()} == canvas_segments(g)


def test_all_open_3x3_matches_oracle():
    c = GateConfig.all_open(make_grid(3, 3))
    assert loop_count(c) == union_find_loop_count(c) == 3


def test_toggle_example_2x2():
    g = make_grid(2, 2)
    k = g.site_index[(1, 2)]
    assert loop_count(toggle(GateConfig.all_open(g), k)) == 1


def test_toggle_involution_and_range():
    c = GateConfig.from_bits(make_grid(2, 3), "0110100")
    assert toggle(toggle(c, 3), 3) == c
    assert toggle_many(c, [0, 0]) == c
    with pytest.raises(IndexError):
        toggle(c, 7)


def test_loops_are_closed_and_canonical():
    rng = random.Random(11)
    g = make_grid(4, 3)
    for _ in range(20):
        c = random_config(g, rng)
        ls = trace(c)
        keys = [lp[0].key for lp in ls.loops]
        assert keys == sorted(keys)
        for lp in ls.loops:
            for a, b in zip(lp, lp[1:] + lp[:1]):
                ox, oy = a.outgoing
                assert b.vertex == (a.vertex[0] + ox, a.vertex[1] + oy)
                assert b.incoming == a.outgoing


def test_trace_is_deterministic():
    c = GateConfig.from_bits(make_grid(3, 3), "101100111010")
    assert trace(c) == trace(c)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.randoms(use_true_random=False))
def test_successor_bijection(w, h, rnd):
    c = random_config(make_grid(w, h), rnd)
    for s in all_states(c.grid):
        assert predecessor(c, successor(c, s)) == s


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.randoms(use_true_random=False))
def test_loop_count_matches_union_find(w, h, rnd):
    c = random_config(make_grid(w, h), rnd)
    assert loop_count(c) == len(trace(c)) == union_find_loop_count(c)


def test_serialize_examples():
    assert serialize(GateConfig(make_grid(1, 1), ())) == "kolam-gates 1 1\n\n"
    assert serialize(GateConfig.all_closed(make_grid(2, 2))) == "kolam-gates 2 2\n1111\n"


@given(st.integers(1, 6), st.integers(1, 6), st.randoms(use_true_random=False))
def test_serialize_round_trip(w, h, rnd):
    c = random_config(make_grid(w, h), rnd)
    text = serialize(c)
    assert deserialize(text) == c
    assert serialize(deserialize(text)) == text


def test_deserialize_allows_leading_comments():
    c = deserialize("kolam-gates 2 2\n# note\n0101\n")
    assert c.bits == "0101"


@pytest.mark.parametrize("text,line,column", [
    ("kolam-gates 2 2\n0101", 2, None),
    ("kolam-gatez 2 2\n0101\n", 1, None),
    ("kolam-gates 2 x\n0101\n", 1, None),
    ("kolam-gates 2 2\n01a1\n", 2, 3),
    ("kolam-gates 2 2\n010\n", 2, None),
    ("kolam-gates 2 2\n0101\n0101\n", 3, None),
    ("kolam-gates 2 2\n", 2, None),
])
def test_deserialize_errors_carry_position(text, line, column):
    with pytest.raises(KolamParseError) as info:
        deserialize(text)
    assert info.value.line == line
    assert info.value.column == column
