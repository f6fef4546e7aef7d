from __future__ import annotations

from dataclasses import replace

import pytest

from stairpack.geom import P, Q, StairPolygon, TriTranslate, square_of
from stairpack.packing import PackingInstance
from stairpack.stair import (
    audit, build_stairs, press_corners, pressers_of, presses, stairs_common_point,
)
from oracles import grid_with_edges

h, q = Q(1, 2), Q(1, 4)


def T(x, y):
    return TriTranslate(P(x, y))


def test_presses_examples():
    assert presses(T(h, h), T(0, 0))
    assert not presses(T(0, 0), T(h, h))
    assert not presses(T(0, 0), T(2, 0))
    with pytest.raises(ValueError):
        presses(T(0, 0), T(0, 0))


def test_pressers_of(two_tri):
    assert pressers_of(two_tri, 0) == [1]
    assert pressers_of(two_tri, 1) == []
    p = PackingInstance(2, 3, ((0, 0), (q, q), (h, h)))
    assert sorted(pressers_of(p, 0)) == [1, 2]


def test_press_corners(two_tri, three_tri):
    assert press_corners(two_tri, 0) == [P(h, h)]
    assert press_corners(three_tri, 0) == [P(h, h)]
    assert press_corners(PackingInstance(2, 2, ((0, 0), (h, h))), 0) == []


def _quadrant_union_oracle(p, i):
    """U_i membership straight from the definition: some k pressers whose squares
    share a point, and the point lies in all their closed upper-right quadrants."""
    from itertools import combinations
    offs = p.offsets
    cs = [j for j in range(p.N) if j != i and presses(T(*offs[j]), T(*offs[i]))]

    def member(pt):
        for sub in combinations(cs, p.k):
            xs = [offs[j].x for j in sub]
            ys = [offs[j].y for j in sub]
            if max(xs) - min(xs) < 1 and max(ys) - min(ys) < 1:
                if pt.x >= max(xs) and pt.y >= max(ys):
                    return True
        return False
    return member


def test_stairs_match_definition_on_grid(two_tri, three_tri, small_corpus):
    for p in [two_tri, three_tri] + small_corpus[::7]:
        fam = build_stairs(p)
        for i, o in enumerate(p.offsets):
            sq = square_of(T(*o))
            in_u = _quadrant_union_oracle(p, i)
            for pt in grid_with_edges(sq, 12):
                assert fam.stairs[i].contains(pt) == (not in_u(pt)), (p, i, pt)


def test_build_stairs_two_triangles(two_tri):
    fam = build_stairs(two_tri)
    assert fam.r == [1, 0]
    assert fam.stairs[0].area == Q(3, 4) and fam.stairs[1].area == 1
    assert fam.n == [1, 0] and fam.n_star == [0, 1]
    assert sum(fam.r) <= (2 * two_tri.k - 1) * two_tri.N


def test_build_stairs_three_triangles(three_tri):
    fam = build_stairs(three_tri)
    assert fam.r == [1, 0, 0]
    assert fam.stairs[0].inner_corners() == [P(h, h)]
    assert [s.area for s in fam.stairs[1:]] == [1, 1]


def test_disjoint_squares_give_full_stairs():
    p = PackingInstance(2, 4, ((0, 0), (2, 0), (0, 2), (Q(5, 2), Q(5, 2))))
    fam = build_stairs(p)
    assert fam.r == [0] * 4
    assert all(s.area == 1 for s in fam.stairs)


def test_build_stairs_rejects_non_normal_and_invalid():
    with pytest.raises(ValueError, match="not normal; run normalize"):
        build_stairs(PackingInstance(2, 2, ((0, 0), (0, 0))))
    with pytest.raises(ValueError, match="precondition"):
        build_stairs(PackingInstance(1, 2, ((0, 0), (q, q))))


def test_audit_small_examples(two_tri, three_tri):
    for p in (two_tri, three_tri):
        rep = audit(p)
        assert rep.passed, rep.to_text()


def test_audit_on_corpus_slice(small_corpus):
    for p in small_corpus:
        rep = audit(p)
        assert rep.passed, rep.to_text()


def test_audit_flags_a_tampered_family(two_tri):
    fam = build_stairs(two_tri)
    bad = replace(fam, stairs=[StairPolygon((0, 1), (1, 0)), fam.stairs[1]])
    rep = audit(two_tri, bad)
    assert not rep.passed
    assert not rep["no-k+1-stairs-meet"].passed


def test_stairs_common_point():
    a = StairPolygon((0, h, 1), (1, h, 0))
    b = StairPolygon((h, 1, Q(3, 2)), (Q(3, 2), 1, h))
    assert stairs_common_point([a, b]) is None
    c = StairPolygon((q, 1), (1, q))
    pt = stairs_common_point([a, c])
    assert pt is not None and a.contains(pt) and c.contains(pt)
