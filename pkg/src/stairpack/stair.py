"""Press relation, stair polygons S_i = I^2(T_i) minus U_i, and their audit."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .geom import (
    Point,
    Q,
    Rational,
    Rect,
    StairPolygon,
    TriTranslate,
    fmt,
    hyp_prec_witness,
    pareto_minimal,
    prec,
    rect_intersect,
    square_of,
    stair_from_corners,
    tri_contains,
    tri_interior_contains,
    v_of,
)
from .packing import PackingInstance, _Grid, is_normal, validate

SUBSET_CAP = 10**6


class SubsetCapExceeded(RuntimeError):
    pass


def squares_meet(a: Point, b: Point) -> bool:
    return abs(a.x - b.x) < 1 and abs(a.y - b.y) < 1


def presses(a: TriTranslate, b: TriTranslate) -> bool:
    """Whether ``a`` presses ``b``: their squares meet and v(b) precedes v(a)."""
    if a.offset == b.offset:
        raise ValueError("identical translates")
    return squares_meet(a.offset, b.offset) and prec(b.offset, a.offset)


def _require_normal(p: PackingInstance) -> None:
    if not is_normal(p):
        raise ValueError("not normal; run normalize")


def square_neighbours(offsets: Sequence[Point]) -> list[list[int]]:
    """For each i, the ascending list of j != i whose unit square meets that of i."""
    grid = _Grid(offsets)
    out = []
    for i, o in enumerate(offsets):
        out.append(sorted(j for j in grid.near(o) if j != i and squares_meet(o, offsets[j])))
    return out


@dataclass(frozen=True)
class PressGraph:
    n: int
    presses: frozenset[tuple[int, int]]  # (j, i): T_j presses T_i
    pressers: tuple[tuple[int, ...], ...]
    pressed: tuple[tuple[int, ...], ...]
    neighbours: tuple[tuple[int, ...], ...]


def press_graph(p: PackingInstance) -> PressGraph:
    _require_normal(p)
    offs = p.offsets
    nbrs = square_neighbours(offs)
    pressers: list[list[int]] = [[] for _ in offs]
    pressed: list[list[int]] = [[] for _ in offs]
    edges = set()
    for i, js in enumerate(nbrs):
        for j in js:
            if prec(offs[i], offs[j]):
                pressers[i].append(j)
                pressed[j].append(i)
                edges.add((j, i))
    return PressGraph(
        len(offs),
        frozenset(edges),
        tuple(tuple(sorted(c)) for c in pressers),
        tuple(tuple(sorted(c)) for c in pressed),
        tuple(tuple(n) for n in nbrs),
    )


def pressers_of(p: PackingInstance, i: int) -> list[int]:
    _require_normal(p)
    t = TriTranslate(p.offsets[i])
    return [j for j, o in enumerate(p.offsets) if j != i and presses(TriTranslate(o), t)]


def _square_cliques(offs: Sequence[Point], members: Sequence[int], size: int,
                    cap: int = SUBSET_CAP) -> Iterator[tuple[int, ...]]:
    """All ``size``-subsets of ``members`` whose unit squares share a point.

    Axis-parallel boxes meet in common iff they meet pairwise, so the common
    intersection is nonempty iff the offsets spread by less than 1 per axis.
    """
    visited = 0
    members = list(members)

    def rec(start: int, chosen: list[int], lox, hix, loy, hiy):
        nonlocal visited
        if len(chosen) == size:
            yield tuple(chosen)
            return
        for idx in range(start, len(members)):
            if len(chosen) + len(members) - idx < size:
                return
            j = members[idx]
            o = offs[j]
            nlx, nhx = min(lox, o.x), max(hix, o.x)
            nly, nhy = min(loy, o.y), max(hiy, o.y)
            if nhx - nlx >= 1 or nhy - nly >= 1:
                continue
            visited += 1
            if visited > cap:
                raise SubsetCapExceeded(f"more than {cap} subsets visited")
            yield from rec(idx + 1, chosen + [j], nlx, nhx, nly, nhy)

    for idx, j in enumerate(members):
        o = offs[j]
        visited += 1
        yield from rec(idx + 1, [j], o.x, o.x, o.y, o.y)


def raw_press_corners(p: PackingInstance, i: int, pressers: Sequence[int] | None = None
                      ) -> list[tuple[Point, tuple[int, ...]]]:
    """Every corner v(I^2(T_a) n ... n I^2(T_z)) over k pressers of T_i, with its subset."""
    if pressers is None:
        pressers = pressers_of(p, i)
    offs = p.offsets
    out = []
    for sub in _square_cliques(offs, pressers, p.k):
        out.append((Point(max(offs[j].x for j in sub), max(offs[j].y for j in sub)), sub))
    return out


def press_corners(p: PackingInstance, i: int, pressers: Sequence[int] | None = None) -> list[Point]:
    """Pareto-minimal corners of the quadrants making up U_i."""
    _require_normal(p)
    return pareto_minimal(c for c, _ in raw_press_corners(p, i, pressers))


# -- the boundary L_i ----------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """Axis-parallel segment; horizontal at y=``at`` over x in [lo, hi] or
    vertical at x=``at`` over y in [lo, hi].  ``hi_closed`` False drops the
    upper endpoint."""

    horizontal: bool
    at: Rational
    lo: Rational
    hi: Rational
    hi_closed: bool = True

    def hits_rect(self, r: Rect) -> Point | None:
        if self.horizontal:
            c0, c1, s0, s1 = r.y0, r.y1, r.x0, r.x1
        else:
            c0, c1, s0, s1 = r.x0, r.x1, r.y0, r.y1
        if not (c0 <= self.at < c1):
            return None
        if not (self.lo < s1 and (self.hi > s0 or (self.hi_closed and self.hi == s0))):
            return None
        s = max(self.lo, s0)
        return Point(s, self.at) if self.horizontal else Point(self.at, s)

    def __str__(self) -> str:
        end = "]" if self.hi_closed else ")"
        if self.horizontal:
            return f"y={fmt(self.at)} x[{fmt(self.lo)},{fmt(self.hi)}{end}"
        return f"x={fmt(self.at)} y[{fmt(self.lo)},{fmt(self.hi)}{end}"


def boundary_segments(s: StairPolygon, square: Rect) -> list[Segment]:
    """(closure(S) minus S) intersected with the half-open square.

    These are the column tops, the inner risers and the final right edge;
    anything on the square's excluded top or right edge is dropped.
    """
    xs, ys, b = s.xs, s.ys, s.bottom
    raw: list[Segment] = []
    for c in range(s.r + 1):
        raw.append(Segment(True, ys[c], xs[c], xs[c + 1]))
        lo = ys[c + 1] if c < s.r else b
        raw.append(Segment(False, xs[c + 1], lo, ys[c]))
    out = []
    for seg in raw:
        edge = square.y1 if seg.horizontal else square.x1
        if seg.at >= edge:
            continue
        far = square.x1 if seg.horizontal else square.y1
        if seg.hi >= far:
            seg = Segment(seg.horizontal, seg.at, seg.lo, far, False)
            if seg.lo >= seg.hi:
                continue
        out.append(seg)
    return out


def segment_meets_stair(seg: Segment, s: StairPolygon) -> Point | None:
    for r in s._rects:
        hit = seg.hits_rect(r)
        if hit is not None:
            return hit
    return None


# -- the family ----------------------------------------------------------------

@dataclass
class StairFamily:
    stairs: list[StairPolygon]
    r: list[int]
    inner_corners: list[list[Point]]
    boundary: list[list[Segment]]
    n: list[int]
    n_star: list[int]
    corners: list[list[Point]] = field(default_factory=list)
    raw_corners: list[list[tuple[Point, tuple[int, ...]]]] = field(default_factory=list)
    graph: PressGraph | None = None


def in_int_or_z(pt: Point, s: StairPolygon) -> bool:
    return s.interior_contains(pt) or pt in s._corners


def build_stairs(p: PackingInstance) -> StairFamily:
    _require_normal(p)
    if validate(p) is not None:
        raise ValueError("precondition: instance is not a valid k-fold packing")
    g = press_graph(p)
    offs = p.offsets
    stairs, corners, raw = [], [], []
    for i, o in enumerate(offs):
        rc = raw_press_corners(p, i, g.pressers[i])
        raw.append(rc)
        cs = pareto_minimal(c for c, _ in rc)
        corners.append(cs)
        stairs.append(stair_from_corners(square_of(TriTranslate(o)), cs))
    n = [0] * len(offs)
    n_star = [0] * len(offs)
    for i in range(len(offs)):
        for j in g.neighbours[i]:
            if in_int_or_z(v_of(stairs[j]), stairs[i]):
                n[i] += 1
                n_star[j] += 1
    return StairFamily(
        stairs=stairs,
        r=[s.r for s in stairs],
        inner_corners=[s.inner_corners() for s in stairs],
        boundary=[boundary_segments(s, square_of(TriTranslate(o))) for s, o in zip(stairs, offs)],
        n=n,
        n_star=n_star,
        corners=corners,
        raw_corners=raw,
        graph=g,
    )


def stairs_common_point(stairs: Sequence[StairPolygon]) -> Point | None:
    """A point in every stair polygon, or None.

    Each stair is a union of half-open rectangles sharing its bottom, so a
    nonempty intersection contains the lower-left corner of some piece: the
    highest bottom paired with one of the x-breakpoints.
    """
    y = max(s.bottom for s in stairs)
    left = max(s.xs[0] for s in stairs)
    for x in sorted({x for s in stairs for x in s.xs if x >= left}):
        pt = Point(x, y)
        if all(s.contains(pt) for s in stairs):
            return pt
    return None


# -- audit -----------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaCheck:
    name: str
    passed: bool
    witness: str = ""


@dataclass
class AuditReport:
    checks: list[LemmaCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> LemmaCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_text(self) -> str:
        width = max((len(c.name) for c in self.checks), default=0)
        lines = []
        for c in self.checks:
            line = f"{c.name:<{width}}  {'PASS' if c.passed else 'FAIL'}"
            if not c.passed and c.witness:
                line += f"  {c.witness}"
            lines.append(line)
        return "\n".join(lines)


def _grid_points(r: Rect, g: int) -> Iterator[Point]:
    for a in range(g):
        for b in range(g):
            yield Point(r.x0 + (r.x1 - r.x0) * Q(a, g), r.y0 + (r.y1 - r.y0) * Q(b, g))


def _first(items: Iterator[str]) -> str | None:
    return next(items, None)


def audit(p: PackingInstance, fam: StairFamily | None = None, grid: int = 4) -> AuditReport:
    """Evaluate every structural property of the stair construction on ``p``."""
    if fam is None:
        fam = build_stairs(p)
    g = fam.graph if fam.graph is not None else press_graph(p)
    offs = p.offsets
    k, N = p.k, len(offs)
    tris = [TriTranslate(o) for o in offs]
    squares = [square_of(t) for t in tris]
    S = fam.stairs
    checks: list[LemmaCheck] = []

    def check(name: str, failures: Callable[[], Iterator[str]]) -> None:
        w = _first(failures())
        checks.append(LemmaCheck(name, w is None, w or ""))

    def dichotomy():
        for i in range(N):
            for j in g.neighbours[i]:
                if j > i and ((j, i) in g.presses) == ((i, j) in g.presses):
                    yield f"pair ({i},{j})"

    def transitivity():
        for j in range(N):
            for i in g.pressers[j]:
                for m in g.pressed[j]:
                    if i != m and squares_meet(offs[i], offs[m]) and (i, m) not in g.presses:
                        yield f"triple ({i},{j},{m})"

    def sink():
        for i in range(N):
            for sub in _square_cliques(offs, [i] + [j for j in g.neighbours[i] if j > i], 3):
                if sub[0] != i:
                    continue
                low = min(sub, key=lambda a: (offs[a].x + offs[a].y, offs[a].x))
                if any((j, low) not in g.presses for j in sub if j != low):
                    yield f"subset {sub}"

    def hypotenuse():
        for i, t in enumerate(tris):
            for u in _grid_points(squares[i], grid):
                if hyp_prec_witness(t, u) != tri_contains(t, u):
                    yield f"T_{i} at {u}"

    raw = fam.raw_corners or [raw_press_corners(p, i, g.pressers[i]) for i in range(N)]

    def square_cut():
        for i in range(N):
            for _, sub in raw[i]:
                box = rect_intersect(squares[j] for j in sub)
                for u in _grid_points(box, grid):
                    if tri_contains(tris[i], u) and not all(tri_contains(tris[j], u) for j in sub):
                        yield f"T_{i} pressers {sub} at {u}"

    def int_t_misses_u():
        for i, (x, y) in enumerate(offs):
            for c, sub in raw[i]:
                if max(c.x, x) + max(c.y, y) < x + y + 1:
                    yield f"T_{i} corner {c} from {sub}"

    def int_t_in_s():
        for i, (x, y) in enumerate(offs):
            s = S[i]
            box_ok = s.xs[0] <= x and s.bottom <= y and s.xs[-1] >= x + 1 and s.ys[0] >= y + 1
            if not box_ok:
                yield f"S_{i} bounding box"
                continue
            for c in s.inner_corners():
                if max(c.x, x) + max(c.y, y) < x + y + 1:
                    yield f"S_{i} corner {c}"
            for u in _grid_points(squares[i], grid):
                if tri_interior_contains(tris[i], u) and not s.contains(u):
                    yield f"S_{i} misses {u}"

    def stair_point_owner():
        for i in range(N):
            for z in fam.inner_corners[i]:
                if not any(S[j].contains(z) and S[j].xs[0] == z.x for j in g.neighbours[i]):
                    yield f"Z(S_{i}) point {z}"

    def no_k_plus_1():
        nb = [set(n) for n in g.neighbours]

        def rec(chosen: list[int], cands: list[int]):
            if len(chosen) == k + 1:
                yield f"stairs {tuple(chosen)} share {stairs_common_point([S[c] for c in chosen])}"
                return
            for idx, j in enumerate(cands):
                sub = chosen + [j]
                if stairs_common_point([S[c] for c in sub]) is None:
                    continue
                yield from rec(sub, [c for c in cands[idx + 1:] if c in nb[j]])

        for i in range(N):
            yield from rec([i], [j for j in g.neighbours[i] if j > i])

    def k_fold_window():
        for i, s in enumerate(S):
            if s.xs[0] < 0 or s.bottom < 0 or s.xs[-1] > p.l or s.ys[0] > p.l:
                yield f"S_{i} leaves the window"
        total = sum((s.area for s in S), Q(0))
        if total > k * p.l * p.l:
            yield f"sum area {fmt(total)} > {k * p.l * p.l}"

    # L_i can only meet S_j when the squares of i and j meet
    l_hits: dict[tuple[int, int], Point | None] = {}
    for i in range(N):
        for j in g.neighbours[i]:
            l_hits[i, j] = next(
                (h for h in (segment_meets_stair(sg, S[j]) for sg in fam.boundary[i]) if h is not None),
                None,
            )

    def l_misses_pressed():
        for (i, j) in sorted(g.presses):
            if l_hits[i, j] is not None:
                yield f"L_{i} meets S_{j} at {l_hits[i, j]}"

    def l_dichotomy():
        for (i, j), hit in sorted(l_hits.items()):
            if i < j and hit is not None and l_hits[j, i] is not None:
                yield f"pair ({i},{j})"

    def n_lower():
        for i in range(N):
            if fam.n[i] < fam.r[i] - k + 1:
                yield f"i={i}: n={fam.n[i]} < r-k+1={fam.r[i] - k + 1}"

    def n_sum():
        for i in range(N):
            if fam.n_star[i] > k:
                yield f"i={i}: n*={fam.n_star[i]} > k"
        if sum(fam.n) > k * N:
            yield f"sum n={sum(fam.n)} > kN={k * N}"

    def n_identity():
        if sum(fam.n) != sum(fam.n_star):
            yield f"sum n={sum(fam.n)} != sum n*={sum(fam.n_star)}"

    def r_sum():
        if sum(fam.r) > (2 * k - 1) * N:
            yield f"sum r={sum(fam.r)} > (2k-1)N={(2 * k - 1) * N}"

    def v_matches():
        for i, s in enumerate(S):
            if v_of(s) != offs[i]:
                yield f"v(S_{i})={v_of(s)} != {offs[i]}"

    check("press-dichotomy", dichotomy)
    check("press-transitivity", transitivity)
    check("pressed-triple-sink", sink)
    check("hypotenuse-order", hypotenuse)
    check("square-cut", square_cut)
    check("interior-misses-cut", int_t_misses_u)
    check("interior-in-stair", int_t_in_s)
    check("stair-point-owner", stair_point_owner)
    check("no-k+1-stairs-meet", no_k_plus_1)
    check("stairs-k-fold", k_fold_window)
    check("boundary-misses-pressed", l_misses_pressed)
    check("boundary-dichotomy", l_dichotomy)
    check("n-ge-r-minus-k-plus-1", n_lower)
    check("sum-n-le-kN", n_sum)
    check("n-double-count", n_identity)
    check("sum-r-le-(2k-1)N", r_sum)
    check("v-of-stair-is-offset", v_matches)
    return AuditReport(checks)
