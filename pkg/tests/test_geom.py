from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stairpack.geom import (
    EMPTY, P, Q, Rect, StairPolygon, TriTranslate, fmt, hyp_prec_witness, pareto_minimal,
    prec, rect_intersect, square_of, stair_area, stair_contains, stair_from_corners,
    tri_contains, tri_interior_contains, v_of,
)
from oracles import grid, grid_with_edges, square_minus_quadrants

h, q = Q(1, 2), Q(1, 4)
UNIT = Rect(Q(0), Q(1), Q(0), Q(1))
ONE_STEP = StairPolygon((0, h, 1), (1, h, 0))

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=12).map(Q)
unit_rationals = st.fractions(min_value=0, max_value=1, max_denominator=16).map(Q)
points = st.builds(P, rationals, rationals)


@pytest.mark.parametrize("u, w, expected", [
    (P(0, 0), P(h, -q), True),
    (P(h, h), P(Q(3, 4), q), True),
    (P(1, 0), P(1, 0), False),
])
def test_prec_examples(u, w, expected):
    assert prec(u, w) is expected


@given(points, points, points)
def test_prec_is_strict_total_order(a, b, c):
    assert not prec(a, a)
    if a != b:
        assert prec(a, b) != prec(b, a)
    if prec(a, b) and prec(b, c):
        assert prec(a, c)


def test_v_of():
    assert v_of(TriTranslate(P(3, 2))) == P(3, 2)
    assert v_of(Rect(h, Q(1), q, Q(1))) == P(h, q)
    assert v_of(ONE_STEP) == P(0, 0)
    with pytest.raises(ValueError):
        v_of(EMPTY)


@pytest.mark.parametrize("offset, rect", [
    (P(0, 0), (0, 1, 0, 1)),
    (P(h, h), (h, Q(3, 2), h, Q(3, 2))),
    (P(-2, 3), (-2, -1, 3, 4)),
])
def test_square_of(offset, rect):
    assert square_of(TriTranslate(offset)) == Rect(*map(Q, rect))


def test_rect_intersect():
    shifted = Rect(h, Q(3, 2), h, Q(3, 2))
    assert rect_intersect([UNIT, shifted]) == Rect(h, Q(1), h, Q(1))
    assert rect_intersect([UNIT, Rect(Q(1), Q(2), Q(0), Q(1))]).is_empty
    assert rect_intersect([UNIT]) == UNIT


def test_triangle_membership():
    t = TriTranslate(P(0, 0))
    assert tri_interior_contains(t, P(q, q))
    assert not tri_interior_contains(t, P(h, h))
    assert not tri_interior_contains(t, P(0, h))
    assert tri_contains(t, P(h, h))


def test_hyp_prec_witness_examples():
    t = TriTranslate(P(0, 0))
    assert hyp_prec_witness(t, P(q, q))
    assert not hyp_prec_witness(t, P(Q(3, 4), Q(3, 4)))
    assert hyp_prec_witness(t, P(h, h))


def test_hyp_prec_witness_matches_closed_triangle_on_grid():
    t = TriTranslate(P(0, 0))
    for u in grid_with_edges(UNIT, 16):
        assert hyp_prec_witness(t, u) == tri_contains(t, u), u


def test_stair_contains_examples():
    assert stair_contains(ONE_STEP, P(Q(3, 4), q))
    assert not stair_contains(ONE_STEP, P(Q(3, 4), h))
    assert stair_contains(ONE_STEP, P(0, 0))
    assert not stair_contains(ONE_STEP, P(1, 0))


@pytest.mark.parametrize("xs, ys, area", [
    ((0, 1), (1, 0), Q(1)),
    ((0, h, 1), (1, h, 0), Q(3, 4)),
    ((0, q, h, Q(3, 4), 1), (1, Q(3, 4), h, q, 0), Q(5, 8)),
])
def test_stair_area(xs, ys, area):
    assert stair_area(StairPolygon(xs, ys)) == area


def test_stair_rejects_bad_breakpoints():
    with pytest.raises(ValueError):
        StairPolygon((0, h, h, 1), (1, h, q, 0))
    with pytest.raises(ValueError):
        StairPolygon((0, h, 1), (1, 1, 0))


@pytest.mark.parametrize("corners, xs, ys", [
    ([P(h, h)], (0, h, 1), (1, h, 0)),
    ([], (0, 1), (1, 0)),
    # (1/2,1/2) is Pareto-minimal alongside the other two, so it adds a step
    ([P(q, Q(3, 4)), P(Q(3, 4), q), P(h, h)], (0, q, h, Q(3, 4), 1), (1, Q(3, 4), h, q, 0)),
])
def test_stair_from_corners_examples(corners, xs, ys):
    s = stair_from_corners(UNIT, corners)
    assert s.xs == tuple(map(Q, xs)) and s.ys == tuple(map(Q, ys))
    for pt in grid_with_edges(UNIT, 64):
        assert s.contains(pt) == square_minus_quadrants(UNIT, corners, pt)


def test_stair_from_corners_degenerate():
    with pytest.raises(ValueError, match="degenerate"):
        stair_from_corners(UNIT, [P(0, 0)])


@settings(max_examples=150, deadline=None)
@given(st.lists(st.builds(P, unit_rationals, unit_rationals), max_size=6))
def test_stair_from_corners_matches_set_difference(corners):
    corners = [c for c in corners if (c.x, c.y) != (0, 0)]
    s = stair_from_corners(UNIT, corners)
    for pt in grid_with_edges(UNIT, 16):
        assert s.contains(pt) == square_minus_quadrants(UNIT, corners, pt)
    for pt in grid(UNIT, 16):
        assert s.contains(pt) == square_minus_quadrants(UNIT, corners, pt)
    # corners on the left or bottom edge lower the stair instead of adding a step
    assert len(s.inner_corners()) == s.r <= len(pareto_minimal(
        [c for c in corners if c.x < 1 and c.y < 1]))


@given(st.lists(st.builds(P, rationals, rationals), max_size=8))
def test_pareto_minimal_is_antichain_covering_input(pts):
    pm = pareto_minimal(pts)
    for a in pm:
        assert not any(b != a and b.x <= a.x and b.y <= a.y for b in pts)
    for c in pts:
        assert any(a.x <= c.x and a.y <= c.y for a in pm)


def test_fmt():
    assert fmt(Q(6, 4)) == "3/2"
    assert fmt(Q(-2)) == "-2"
    assert str(P(h, 0)) == "(1/2, 0)"
