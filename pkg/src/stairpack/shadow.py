"""k-fold shadow-cell membership for families of convex polygons.

Only membership is computed; cell regions are never built.  Distances along
the ray L(q, v) are compared through the ray parameter t, which is exact and
orders hit points exactly like Euclidean distance from q.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .geom import Point, Q, Rational


def cross(ax, ay, bx, by):
    return ax * by - ay * bx


@dataclass(frozen=True)
class ConvexPolygon:
    """Closed convex polygon, vertices counterclockwise with no three collinear."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        vs = tuple(Point(Q(v[0]), Q(v[1])) for v in self.vertices)
        if len(vs) < 3:
            raise ValueError("a convex polygon needs at least 3 vertices")
        n = len(vs)
        for i in range(n):
            a, b, c = vs[i], vs[(i + 1) % n], vs[(i + 2) % n]
            if cross(b.x - a.x, b.y - a.y, c.x - b.x, c.y - b.y) <= 0:
                raise ValueError("vertices must be strictly convex and counterclockwise")
        object.__setattr__(self, "vertices", vs)
        # edge (ex, ey, c0): inside iff ex*y - ey*x - c0 >= 0
        edges = []
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            ex, ey = b.x - a.x, b.y - a.y
            edges.append((ex, ey, ex * a.y - ey * a.x))
        object.__setattr__(self, "_edges", tuple(edges))

    def translate(self, d) -> "ConvexPolygon":
        dx, dy = Q(d[0]), Q(d[1])
        return ConvexPolygon(tuple(Point(v.x + dx, v.y + dy) for v in self.vertices))

    def contains(self, q: Point) -> bool:
        return all(ex * q.y - ey * q.x >= c0 for ex, ey, c0 in self._edges)

    def on_boundary(self, q: Point) -> bool:
        vals = [ex * q.y - ey * q.x - c0 for ex, ey, c0 in self._edges]
        return min(vals) == 0

    @property
    def area(self) -> Rational:
        return polygon_area(self.vertices)


def triangle_translate(offset) -> ConvexPolygon:
    x, y = Q(offset[0]), Q(offset[1])
    return ConvexPolygon((Point(x, y), Point(x + 1, y), Point(x, y + 1)))


@dataclass(frozen=True)
class RayHit:
    t: Rational
    point: Point


def _hit_t(K: ConvexPolygon, q: Point, v: Point) -> Rational | None:
    """Least t >= 0 with q + t v in K, or None."""
    lo, hi = Q(0), None
    for ex, ey, c0 in K._edges:
        c = ex * q.y - ey * q.x - c0
        s = ex * v.y - ey * v.x
        # constraint c + t s >= 0
        if s == 0:
            if c < 0:
                return None
        elif s > 0:
            if c < 0:
                t = -c / s
                if t > lo:
                    lo = t
        else:
            t = c / -s
            if hi is None or t < hi:
                hi = t
            if hi < lo:
                return None
    if hi is not None and hi < lo:
        return None
    return lo


def _direction(v) -> Point:
    v = Point(Q(v[0]), Q(v[1]))
    if v.x == 0 and v.y == 0:
        raise ValueError("direction must be nonzero")
    return v


def ray_boundary_point(K: ConvexPolygon, q: Point, v) -> RayHit | None:
    """The point of K on the ray from q along v nearest to q."""
    v = _direction(v)
    q = Point(Q(q[0]), Q(q[1]))
    t = _hit_t(K, q, v)
    if t is None:
        return None
    return RayHit(t, Point(q.x + t * v.x, q.y + t * v.y))


def _members(ts: Sequence[Rational | None], k: int, strict: bool) -> list[int]:
    """Indices i whose cell contains q, given each member's hit parameter.

    q lies in K_i exactly when t_i = 0, and then i is a member outright.
    """
    hits = [t for t in ts if t is not None]
    out = []
    for i, t in enumerate(ts):
        if t is None:
            continue
        if t == 0:
            out.append(i)
            continue
        if strict:
            rivals = sum(1 for u in hits if u < t)
        else:
            rivals = sum(1 for u in hits if u <= t) - 1
        if rivals <= k - 1:
            out.append(i)
    return out


def shadow_member(family: Sequence[ConvexPolygon], k: int, i: int, q, v) -> bool:
    q, v = Point(Q(q[0]), Q(q[1])), _direction(v)
    return i in _members([_hit_t(K, q, v) for K in family], k, strict=False)


def shadow_member_strict(family: Sequence[ConvexPolygon], k: int, i: int, q, v) -> bool:
    q, v = Point(Q(q[0]), Q(q[1])), _direction(v)
    return i in _members([_hit_t(K, q, v) for K in family], k, strict=True)


def multiplicity(family: Sequence[ConvexPolygon], k: int, q: Point, v, strict: bool = False) -> int:
    v = _direction(v)
    return len(_members([_hit_t(K, q, v) for K in family], k, strict))


def sample_multiplicity(family: Sequence[ConvexPolygon], k: int, v, points: Iterable[Point],
                        strict: bool = False) -> int:
    v = _direction(v)
    best = 0
    for q in points:
        m = len(_members([_hit_t(K, q, v) for K in family], k, strict))
        if m > best:
            best = m
    return best


def sample_points(family: Sequence[ConvexPolygon], n: int, seed: int,
                  margin: Rational = Q(1), jitter_denom: int = 997) -> list[Point]:
    """Seeded rational lattice over the family's bounding box, with jitter.

    Points on the boundary of any member are dropped: there a point may lie
    in more than k closed members without violating the packing condition.
    """
    rng = random.Random(seed)
    xs = [v.x for K in family for v in K.vertices]
    ys = [v.y for K in family for v in K.vertices]
    x0, x1 = min(xs) - margin, max(xs) + margin
    y0, y1 = min(ys) - margin, max(ys) + margin
    side = max(1, int(n ** 0.5))
    out = []
    for a in range(side):
        for b in range(side):
            jx = Q(rng.randrange(jitter_denom), jitter_denom)
            jy = Q(rng.randrange(jitter_denom), jitter_denom)
            q = Point(x0 + (x1 - x0) * (a + jx) / side, y0 + (y1 - y0) * (b + jy) / side)
            if not any(K.on_boundary(q) for K in family):
                out.append(q)
    return out


# -- k-fold validity for polygon families -------------------------------------------

def polygon_area(vs: Sequence[Point]) -> Rational:
    n = len(vs)
    return sum((vs[i].x * vs[(i + 1) % n].y - vs[(i + 1) % n].x * vs[i].y for i in range(n)), Q(0)) / 2


def clip(subject: list[Point], K: ConvexPolygon) -> list[Point]:
    """Sutherland-Hodgman clip of a convex polygon by the closed polygon K."""
    out = subject
    for ex, ey, c0 in K._edges:
        if not out:
            break
        inp, out = out, []
        vals = [ex * p.y - ey * p.x - c0 for p in inp]
        for idx, p in enumerate(inp):
            nxt = inp[(idx + 1) % len(inp)]
            fp, fn = vals[idx], vals[(idx + 1) % len(inp)]
            if fp >= 0:
                out.append(p)
            if (fp > 0 and fn < 0) or (fp < 0 and fn > 0):
                t = fp / (fp - fn)
                out.append(Point(p.x + t * (nxt.x - p.x), p.y + t * (nxt.y - p.y)))
    return out


def interiors_meet(polys: Sequence[ConvexPolygon]) -> bool:
    """Whether the open interiors share a point (the closed intersection has area)."""
    region = list(polys[0].vertices)
    for K in polys[1:]:
        region = clip(region, K)
        if len(region) < 3:
            return False
    return polygon_area(region) > 0


def is_kfold_packing(family: Sequence[ConvexPolygon], k: int) -> bool:
    """No point lies in the interiors of k+1 members."""
    n = len(family)

    def rec(chosen: list[int], start: int) -> bool:
        if len(chosen) == k + 1:
            return False
        for j in range(start, n):
            sub = chosen + [j]
            if len(sub) > 1 and not interiors_meet([family[c] for c in sub]):
                continue
            if not rec(sub, j + 1):
                return False
        return True

    return rec([], 0)


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Counterclockwise hull with collinear points removed (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts

    def half(seq):
        h: list[Point] = []
        for p in seq:
            while len(h) >= 2 and cross(h[-1].x - h[-2].x, h[-1].y - h[-2].y,
                                        p.x - h[-1].x, p.y - h[-1].y) <= 0:
                h.pop()
            h.append(p)
        return h

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


def random_convex_polygon(rng: random.Random, denom: int = 4, spread: int = 4) -> ConvexPolygon:
    while True:
        pts = [Point(Q(rng.randint(0, spread * denom), denom), Q(rng.randint(0, spread * denom), denom))
               for _ in range(rng.randint(3, 7))]
        hull = convex_hull(pts)
        if len(hull) >= 3 and polygon_area(hull) > 0:
            return ConvexPolygon(tuple(hull))


def random_family(k: int, seed: int, members: int = 6, tries: int = 200) -> list[ConvexPolygon]:
    """Greedy seeded family of translates of one random convex polygon forming a k-fold packing."""
    rng = random.Random(seed)
    base = random_convex_polygon(rng)
    fam: list[ConvexPolygon] = []
    for _ in range(tries):
        if len(fam) == members:
            break
        d = (Q(rng.randint(0, 24), 4), Q(rng.randint(0, 24), 4))
        cand = fam + [base.translate(d)]
        if is_kfold_packing(cand, k):
            fam = cand
    return fam


# -- the strict-inequality failure --------------------------------------------------

@dataclass(frozen=True)
class StrictCounterexample:
    family: tuple[ConvexPolygon, ...]
    witness: Point
    direction: Point
    strict_multiplicity: int
    multiplicity: int


_BASES = (
    ConvexPolygon((Point(Q(0), Q(0)), Point(Q(1), Q(0)), Point(Q(0), Q(1)))),
    ConvexPolygon((Point(Q(0), Q(0)), Point(Q(1), Q(0)), Point(Q(1), Q(1)), Point(Q(0), Q(1)))),
    ConvexPolygon((Point(Q(0), Q(0)), Point(Q(2), Q(0)), Point(Q(1), Q(1)), Point(Q(0), Q(1)))),
)


def find_strict_counterexample(k: int = 2, seed: int = 0, attempts: int = 2000) -> StrictCounterexample | None:
    """Search small families where the strict comparison admits k+1 cells at one point.

    Translates are stacked along a common edge direction so that a ray can
    reach several boundaries at the same parameter.  Candidate witnesses sit
    one unit before each vertex of the family, against the ray direction.
    """
    rng = random.Random(seed)
    v = Point(Q(1), Q(0))
    for _ in range(attempts):
        base = rng.choice(_BASES)
        fam = [base]
        for _ in range(k):
            dy = Q(rng.randint(1, 8), 4)
            dx = Q(rng.randint(-1, 1), 4) if rng.random() < 0.3 else Q(0)
            fam.append(fam[-1].translate((dx, dy)))
        if not is_kfold_packing(fam, k):
            continue
        for K in fam:
            for p in K.vertices:
                q = Point(p.x - v.x, p.y - v.y)
                m_strict = multiplicity(fam, k, q, v, strict=True)
                if m_strict >= k + 1:
                    m = multiplicity(fam, k, q, v)
                    if m <= k:
                        return StrictCounterexample(tuple(fam), q, v, m_strict, m)
    return None

