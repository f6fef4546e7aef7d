"""Minimal stair areas, optimal k-fold lattices, and the density bound certificate."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .geom import Point, Q, Rational, StairPolygon, fmt
from .packing import TRI_AREA, PackingInstance, find_violation, is_normal
from .stair import StairFamily, build_stairs


class LatticeNotFound(RuntimeError):
    pass


def a_star(r: int) -> Rational:
    """Least area of a half-open r-stair polygon containing Int(T)."""
    if r < 0:
        raise ValueError("r must be non-negative")
    return Q(r + 2, 2 * (r + 1))


def b_star(x) -> Rational:
    """The convex decreasing extension of a_star to x >= 0."""
    x = Q(x)
    if x < 0:
        raise ValueError("b_star is defined on [0, inf)")
    return (x + 2) / (2 * (x + 1))


def optimal_stair(r: int) -> StairPolygon:
    """Uniform staircase with every inner corner on the line x + y = 1."""
    if r < 0:
        raise ValueError("r must be non-negative")
    xs = tuple(Q(j, r + 1) for j in range(r + 2))
    return StairPolygon(xs, tuple(1 - x for x in xs))


def contains_int_T(s: StairPolygon) -> bool:
    if not (s.xs[0] <= 0 and s.bottom <= 0 and s.xs[-1] >= 1 and s.ys[0] >= 1):
        return False
    return all(c.x + c.y >= 1 for c in s.inner_corners())


def convexity_check(r: int) -> bool:
    if r < 1:
        raise ValueError("r must be at least 1")
    return 2 * a_star(r) <= a_star(r - 1) + a_star(r + 1)


# -- lattices ----------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeBasis:
    u: Point
    w: Point

    def __post_init__(self):
        object.__setattr__(self, "u", Point(Q(self.u[0]), Q(self.u[1])))
        object.__setattr__(self, "w", Point(Q(self.w[0]), Q(self.w[1])))
        if self.det == 0:
            raise ValueError("degenerate basis")

    @property
    def det(self) -> Rational:
        return abs(self.u.x * self.w.y - self.u.y * self.w.x)

    @property
    def density(self) -> Rational:
        return TRI_AREA / self.det

    def point(self, a: int, b: int) -> Point:
        return Point(a * self.u.x + b * self.w.x, a * self.u.y + b * self.w.y)

    def coords(self, p: Point) -> tuple[Rational, Rational]:
        """(a, b) with a*u + b*w = p."""
        d = self.u.x * self.w.y - self.u.y * self.w.x
        a = (p.x * self.w.y - p.y * self.w.x) / d
        b = (self.u.x * p.y - self.u.y * p.x) / d
        return a, b

    def points_in_box(self, x0, x1, y0, y1) -> list[Point]:
        """All lattice points in the closed box, sorted by (y, x)."""
        corners = [self.coords(Point(Q(x), Q(y))) for x in (x0, x1) for y in (y0, y1)]
        a_lo = math.floor(min(c[0] for c in corners))
        a_hi = math.ceil(max(c[0] for c in corners))
        b_lo = math.floor(min(c[1] for c in corners))
        b_hi = math.ceil(max(c[1] for c in corners))
        out = []
        for a in range(a_lo, a_hi + 1):
            for b in range(b_lo, b_hi + 1):
                q = self.point(a, b)
                if x0 <= q.x <= x1 and y0 <= q.y <= y1:
                    out.append(q)
        out.sort(key=lambda q: (q.y, q.x))
        return out


def candidate_basis(k: int) -> LatticeBasis:
    h = Q(1, 2 * k)
    return LatticeBasis(Point(h, h), Point(Q(0), 1 + h))


def verify_lattice_packing(b: LatticeBasis, k: int) -> bool:
    """Exact check that the lattice translates of T cover no point more than k times.

    Multiplicity is periodic, so it suffices to look at points of one closed
    fundamental parallelogram F; only translates whose bounding box meets the
    bounding box of F can contain such points.
    """
    cs = [Point(Q(0), Q(0)), b.u, b.w, b.u + b.w]
    fx0, fx1 = min(c.x for c in cs), max(c.x for c in cs)
    fy0, fy1 = min(c.y for c in cs), max(c.y for c in cs)
    offsets = b.points_in_box(fx0 - 1, fx1, fy0 - 1, fy1)
    return find_violation(offsets, k) is None


def optimal_lattice(k: int, search_bound: int | None = None) -> LatticeBasis:
    """A verified basis of determinant (2k+1)/(4k^2), i.e. density 2k^2/(2k+1).

    The closed-form candidate is tried first; otherwise bases ((a, b), (0, c))
    with entries of denominator <= 4k^2 and |a|, |b|, |c| <= 2 are searched.
    """
    if k < 1:
        raise ValueError("k must be positive")
    target = Q(2 * k + 1, 4 * k * k)
    cand = candidate_basis(k)
    if cand.det == target and verify_lattice_packing(cand, k):
        return cand
    D = search_bound or 4 * k * k
    grid = sorted({Q(n, d) for d in range(1, D + 1) for n in range(-2 * d, 2 * d + 1)})
    for c in (g for g in grid if g > 0):
        a = target / c
        if a.denominator > D or a > 2:
            continue
        for bb in grid:
            basis = LatticeBasis(Point(a, bb), Point(Q(0), c))
            if verify_lattice_packing(basis, k):
                return basis
    raise LatticeNotFound("no verified lattice found")


def lattice_clip(b: LatticeBasis, k: int, l: int) -> PackingInstance:
    """Every lattice translate of T lying in the window [0, l]^2.

    The lattice always contains the origin, so the translate at offset (0, 0)
    is present whenever l >= 1.
    """
    pts = b.points_in_box(0, l - 1, 0, l - 1)
    return PackingInstance(k, l, tuple(pts))


# -- the certificate ---------------------------------------------------------------------

@dataclass(frozen=True)
class Link:
    label: str
    lhs: Rational
    rhs: Rational

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


@dataclass(frozen=True)
class BoundCertificate:
    N: int
    k: int
    l: int
    sum_stair_area: Rational
    sum_astar: Rational
    r_mean: Rational
    links: tuple[Link, ...]

    @property
    def verdict(self) -> bool:
        return all(link.holds for link in self.links)

    def to_text(self) -> str:
        lines = [f"{fmt(x.lhs)} <= {fmt(x.rhs)}" for x in self.links]
        lines.append(f"VERDICT: {'PASS' if self.verdict else 'FAIL'}")
        return "\n".join(lines)


def certify_bound(p: PackingInstance, fam: StairFamily | None = None) -> BoundCertificate:
    """Evaluate the four-link chain from window density to 2k^2/(2k+1)."""
    if not is_normal(p):
        raise ValueError("not normal; run normalize")
    if p.N < 1:
        raise ValueError("certificate needs at least one triangle")
    if fam is None:
        fam = build_stairs(p)
    N, k, l = p.N, p.k, p.l
    kNT = k * N * TRI_AREA
    sum_area = sum((s.area for s in fam.stairs), Q(0))
    sum_a = sum((a_star(r) for r in fam.r), Q(0))
    r_mean = Q(sum(fam.r), N)
    v0 = N * TRI_AREA / (l * l)
    v1 = kNT / sum_area
    v2 = kNT / sum_a
    v3 = kNT / (N * b_star(r_mean))
    v4 = k * TRI_AREA / a_star(2 * k - 1)
    links = (
        Link("window density vs stair areas", v0, v1),
        Link("stair areas vs a_star(r_i)", v1, v2),
        Link("convexity of b_star", v2, v3),
        Link("mean r <= 2k-1", v3, v4),
    )
    return BoundCertificate(N, k, l, sum_area, sum_a, r_mean, links)


def bound_value(k: int) -> Rational:
    return k * TRI_AREA / a_star(2 * k - 1)

