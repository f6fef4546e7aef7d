"""Exact planar primitives for translates of the unit right triangle.

All coordinates are exact rationals (``gmpy2.mpq``, or
:class:`fractions.Fraction` when gmpy2 is missing).  Squares, rectangles and
stair polygons are half-open (``[x0, x1) x [y0, y1)``); triangles are closed,
with a separate interior test.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, singledispatch
from typing import Iterable, NamedTuple, Sequence, Union

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

Rational = Q
Number = Union[int, Rational, str]


class Point(NamedTuple):
    x: Rational
    y: Rational

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def __str__(self) -> str:
        return f"({fmt(self.x)}, {fmt(self.y)})"


def P(x: Number, y: Number) -> Point:
    """Build a Point, coercing both coordinates to exact rationals."""
    return Point(Q(x), Q(y))


def fmt(q: Rational) -> str:
    """Canonical text form: ``p/q`` or an integer."""
    q = Q(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def prec(u: Point, w: Point) -> bool:
    """The order used throughout: by coordinate sum, then by x."""
    su, sw = u.x + u.y, w.x + w.y
    return su < sw or (su == sw and u.x < w.x)


def prec_eq(u: Point, w: Point) -> bool:
    return u == w or prec(u, w)


@dataclass(frozen=True)
class TriTranslate:
    """The closed triangle ``T + offset`` with T = conv{(0,0), (1,0), (0,1)}."""

    offset: Point

    @property
    def vertices(self) -> tuple[Point, Point, Point]:
        o = self.offset
        return (o, o + (1, 0), o + (0, 1))

    @property
    def hypotenuse(self) -> tuple[Point, Point]:
        o = self.offset
        return (o + (1, 0), o + (0, 1))


@dataclass(frozen=True)
class Rect:
    """Half-open rectangle ``[x0, x1) x [y0, y1)``."""

    x0: Rational
    x1: Rational
    y0: Rational
    y1: Rational

    @property
    def is_empty(self) -> bool:
        return not (self.x0 < self.x1 and self.y0 < self.y1)

    def contains(self, p: Point) -> bool:
        return self.x0 <= p.x < self.x1 and self.y0 <= p.y < self.y1

    @property
    def area(self) -> Rational:
        if self.is_empty:
            return Q(0)
        return (self.x1 - self.x0) * (self.y1 - self.y0)


EMPTY = Rect(Q(0), Q(0), Q(0), Q(0))


@dataclass(frozen=True)
class Quadrant:
    """Closed upper-right quadrant ``{(x, y): x >= cx, y >= cy}``."""

    corner: Point

    def contains(self, p: Point) -> bool:
        return p.x >= self.corner.x and p.y >= self.corner.y


@dataclass(frozen=True)
class StairPolygon:
    """Half-open r-stair polygon ``U_i [x_i, x_{i+1}) x [y_{r+1}, y_i)``.

    ``xs`` must be strictly increasing and ``ys`` strictly decreasing, both of
    length r + 2.
    """

    xs: tuple[Rational, ...]
    ys: tuple[Rational, ...]

    def __post_init__(self):
        xs = tuple(Q(x) for x in self.xs)
        ys = tuple(Q(y) for y in self.ys)
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError("stair polygon needs r+2 >= 2 breakpoints on each axis")
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise ValueError("xs must be strictly increasing")
        if any(a <= b for a, b in zip(ys, ys[1:])):
            raise ValueError("ys must be strictly decreasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def r(self) -> int:
        return len(self.xs) - 2

    @property
    def bottom(self) -> Rational:
        return self.ys[-1]

    @cached_property
    def _rects(self) -> tuple[Rect, ...]:
        b = self.bottom
        return tuple(Rect(self.xs[i], self.xs[i + 1], b, self.ys[i]) for i in range(self.r + 1))

    @cached_property
    def _corners(self) -> tuple[Point, ...]:
        return tuple(Point(self.xs[j], self.ys[j]) for j in range(1, self.r + 1))

    def rects(self) -> list[Rect]:
        return list(self._rects)

    def inner_corners(self) -> list[Point]:
        """The r points (x_j, y_j), j = 1..r, where the staircase turns inward."""
        return list(self._corners)

    def height_at(self, x: Rational) -> Rational | None:
        """Top of the column containing ``x``, or None if x is outside [x_0, x_{r+1})."""
        xs = self.xs
        if not xs[0] <= x < xs[-1]:
            return None
        lo, hi = 0, len(xs) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if xs[mid] <= x:
                lo = mid
            else:
                hi = mid
        return self.ys[lo]

    def contains(self, p: Point) -> bool:
        h = self.height_at(p.x)
        return h is not None and self.bottom <= p.y < h

    def interior_contains(self, p: Point) -> bool:
        xs = self.xs
        if not (xs[0] < p.x < xs[-1] and self.bottom < p.y):
            return False
        h = self.height_at(p.x)
        # on a riser the lower neighbouring column bounds the interior
        return p.y < h

    @property
    def area(self) -> Rational:
        b = self.bottom
        return sum(
            ((self.xs[i + 1] - self.xs[i]) * (self.ys[i] - b) for i in range(self.r + 1)),
            Q(0),
        )


Region = Union[TriTranslate, Rect, StairPolygon]


@singledispatch
def v_of(region) -> Point:
    """The order-greatest point lying order-below-or-equal every point of ``region``."""
    raise TypeError(f"v_of is not defined for {type(region).__name__}")


@v_of.register
def _(region: TriTranslate) -> Point:
    return region.offset


@v_of.register
def _(region: Rect) -> Point:
    if region.is_empty:
        raise ValueError("empty region")
    return Point(region.x0, region.y0)


@v_of.register
def _(region: StairPolygon) -> Point:
    return Point(region.xs[0], region.bottom)


def square_of(t: TriTranslate) -> Rect:
    x, y = t.offset
    return Rect(x, x + 1, y, y + 1)


def rect_intersect(rs: Iterable[Rect]) -> Rect:
    rs = list(rs)
    if not rs:
        raise ValueError("intersection of no rectangles")
    out = Rect(
        max(r.x0 for r in rs), min(r.x1 for r in rs),
        max(r.y0 for r in rs), min(r.y1 for r in rs),
    )
    return EMPTY if out.is_empty else out


def tri_contains(t: TriTranslate, p: Point) -> bool:
    x, y = t.offset
    return p.x >= x and p.y >= y and p.x + p.y <= x + y + 1


def tri_interior_contains(t: TriTranslate, p: Point) -> bool:
    x, y = t.offset
    return p.x > x and p.y > y and p.x + p.y < x + y + 1


def hyp_prec_witness(t: TriTranslate, u: Point) -> bool:
    """Whether some point of the hypotenuse of ``t`` is order-above ``u``.

    The hypotenuse runs from (x+1, y) to (x, y+1); its order-greatest point is
    (x+1, y), so the existential reduces to comparing against that endpoint.
    """
    if not square_of(t).contains(u):
        raise ValueError("precondition: u must lie in the square of t")
    x, y = t.offset
    s, su = x + y + 1, u.x + u.y
    return su < s or (su == s and u.x < x + 1)


def stair_contains(s: StairPolygon, p: Point) -> bool:
    return s.contains(p)


def stair_area(s: StairPolygon) -> Rational:
    return s.area


def pareto_minimal(corners: Iterable[Point]) -> list[Point]:
    """Corners not weakly dominated by another, sorted by ascending x."""
    out: list[Point] = []
    best_y = None
    for c in sorted(set(corners)):
        if best_y is None or c.y < best_y:
            out.append(c)
            best_y = c.y
    return out


def stair_from_corners(square: Rect, corners: Sequence[Point]) -> StairPolygon:
    """``square`` minus the closed quadrants at ``corners``, as a stair polygon."""
    X0, X1, Y0, Y1 = square.x0, square.x1, square.y0, square.y1
    clipped = [
        Point(max(c.x, X0), max(c.y, Y0))
        for c in corners
        if c.x < X1 and c.y < Y1
    ]
    mins = pareto_minimal(clipped)
    if mins and mins[0] == Point(X0, Y0):
        raise ValueError("degenerate stair")
    xs = [X0] + [c.x for c in mins] + [X1]
    ys = [Y1] + [c.y for c in mins] + [Y0]
    if mins and mins[0].x == X0:
        # corner on the left edge lowers the first column instead of adding one
        del xs[0], ys[0]
    if mins and mins[-1].y == Y0:
        # corner on the bottom edge removes the last column
        del xs[-1], ys[-1]
    return StairPolygon(tuple(xs), tuple(ys))
