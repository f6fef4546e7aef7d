"""k-fold translative packings of the unit right triangle in a square window."""
from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from math import floor
from typing import Iterable, Iterator, Sequence

from .geom import Point, Q, Rational, fmt

TRI_AREA = Q(1, 2)


def density_bound(k: int) -> Rational:
    """2k^2 / (2k+1): the optimal k-fold lattice density of a triangle."""
    return Q(2 * k * k, 2 * k + 1)


@dataclass(frozen=True)
class PackingInstance:
    k: int
    l: int
    offsets: tuple[Point, ...] = ()

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ValueError("k and l must be positive integers")
        offsets = tuple(Point(Q(o[0]), Q(o[1])) for o in self.offsets)
        for i, (x, y) in enumerate(offsets):
            if not (0 <= x and 0 <= y and x + 1 <= self.l and y + 1 <= self.l):
                raise ValueError(f"offset {i} {Point(x, y)} puts its triangle outside the window")
        object.__setattr__(self, "offsets", offsets)

    @property
    def N(self) -> int:
        return len(self.offsets)


@dataclass(frozen=True)
class ScaledPackingInstance:
    """Translates of ``size * T``; ``sources[i]`` is the original triangle index."""

    k: int
    l: int
    size: Rational
    offsets: tuple[Point, ...]
    sources: tuple[int, ...]

    def to_unit(self) -> PackingInstance:
        """Rescale by 1/size so the members are unit triangles again.

        The window grows to ceil(l / size); validity and normality are
        preserved because the map is a similarity.
        """
        inv = 1 / self.size
        window = int(-(-self.l * inv.numerator // inv.denominator))
        return PackingInstance(self.k, window, tuple(Point(o.x * inv, o.y * inv) for o in self.offsets))


@dataclass(frozen=True)
class Violation:
    indices: tuple[int, ...]
    witness: Point

    def __str__(self) -> str:
        return f"VIOLATION indices {' '.join(map(str, self.indices))} witness {self.witness}"


@dataclass(frozen=True)
class DensityReport:
    N: int
    window_density: Rational
    bound: Rational
    slack: Rational = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "slack", self.bound - self.window_density)


def _open_gap(offsets: Sequence[Point], size: Rational = Q(1)) -> Rational:
    """Positive iff the open triangles share an interior point.

    The interiors are {x > x_i, y > y_i, x + y < x_i + y_i + size}; the system
    is feasible iff max x_i + max y_i < min (x_i + y_i) + size.
    """
    mx = max(o.x for o in offsets)
    my = max(o.y for o in offsets)
    ms = min(o.x + o.y for o in offsets)
    return ms + size - mx - my


def _witness(offsets: Sequence[Point], size: Rational = Q(1)) -> Point:
    sigma = _open_gap(offsets, size) / 4
    return Point(max(o.x for o in offsets) + sigma, max(o.y for o in offsets) + sigma)


class _Grid:
    """Bucket offsets by integer cell so neighbours within distance < size are cheap."""

    def __init__(self, offsets: Sequence[Point], cell: Rational = Q(1)):
        self.cell = cell
        self.buckets: dict[tuple[int, int], list[int]] = defaultdict(list)
        self.offsets = offsets
        for i, o in enumerate(offsets):
            self.buckets[self.key(o)].append(i)

    def key(self, o: Point) -> tuple[int, int]:
        return floor(o.x / self.cell), floor(o.y / self.cell)

    def near(self, o: Point) -> Iterator[int]:
        cx, cy = self.key(o)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                yield from self.buckets.get((cx + dx, cy + dy), ())


def overlap_graph(offsets: Sequence[Point], size: Rational = Q(1)) -> list[list[int]]:
    """For each i, the ascending list of j > i whose open triangle meets that of i."""
    grid = _Grid(offsets, size)
    adj: list[list[int]] = []
    for i, o in enumerate(offsets):
        nbrs = []
        for j in grid.near(o):
            if j > i:
                q = offsets[j]
                if abs(q.x - o.x) < size and abs(q.y - o.y) < size and _open_gap((o, q), size) > 0:
                    nbrs.append(j)
        nbrs.sort()
        adj.append(nbrs)
    return adj


def find_violation(offsets: Sequence[Point], k: int, size: Rational = Q(1)) -> Violation | None:
    """First (k+1)-set, in lexicographic index order, whose open triangles share a point.

    Depth-first over ascending indices; a branch is abandoned as soon as its
    partial set has an empty common interior, which only shrinks as members
    are added.
    """
    offsets = list(offsets)
    adj = overlap_graph(offsets, size)
    adj_sets = [set(a) for a in adj]

    def extend(chosen: list[int], cands: list[int], mx, my, ms) -> tuple[int, ...] | None:
        if len(chosen) == k + 1:
            return tuple(chosen)
        for idx, j in enumerate(cands):
            o = offsets[j]
            nx, ny, ns = max(mx, o.x), max(my, o.y), min(ms, o.x + o.y)
            if ns + size <= nx + ny:
                continue
            nxt = [c for c in cands[idx + 1:] if c in adj_sets[j]]
            if len(chosen) + 1 + len(nxt) < k + 1:
                continue
            found = extend(chosen + [j], nxt, nx, ny, ns)
            if found:
                return found
        return None

    for i, o in enumerate(offsets):
        if len(adj[i]) < k:
            continue
        found = extend([i], adj[i], o.x, o.y, o.x + o.y)
        if found:
            return Violation(found, _witness([offsets[c] for c in found], size))
    return None


def validate(p: PackingInstance) -> Violation | None:
    """None if no point lies in the interiors of k+1 triangles, else the first violation."""
    return find_violation(p.offsets, p.k)


def validate_scaled(p: ScaledPackingInstance) -> Violation | None:
    return find_violation(p.offsets, p.k, p.size)


def is_normal(p: PackingInstance) -> bool:
    return len(set(p.offsets)) == len(p.offsets)


def normalize(p: PackingInstance, eps) -> ScaledPackingInstance:
    """Shrink every triangle to (1-eps)T and spread coincident ones along (1,1).

    The j-th copy in a group of m equal offsets moves by j*eps/(2m) on both
    axes; since (1-eps)T + d(1,1) lies in T whenever d <= eps/2, each new
    triangle stays inside its source and k-fold validity carries over.
    """
    eps = Q(eps)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if validate(p) is not None:
        raise ValueError("precondition: instance is not a valid k-fold packing")
    groups: dict[Point, list[int]] = defaultdict(list)
    for i, o in enumerate(p.offsets):
        groups[o].append(i)
    new: list[Point] = list(p.offsets)
    for o, members in groups.items():
        m = len(members)
        for j, i in enumerate(members):
            d = j * eps / (2 * m)
            new[i] = Point(o.x + d, o.y + d)
    return ScaledPackingInstance(p.k, p.l, 1 - eps, tuple(new), tuple(range(p.N)))


def scaled_contained_in_source(p: PackingInstance, s: ScaledPackingInstance) -> bool:
    for o_new, src in zip(s.offsets, s.sources):
        o = p.offsets[src]
        if not (o_new.x >= o.x and o_new.y >= o.y and o_new.x + o_new.y + s.size <= o.x + o.y + 1):
            return False
    return True


def window_density(p: PackingInstance) -> DensityReport:
    return DensityReport(p.N, Q(p.N) * TRI_AREA / (p.l * p.l), density_bound(p.k))


# -- search -----------------------------------------------------------------

SEARCH_DENOM = 12
_MOVES = (("insert", 0.5), ("jiggle", 0.3), ("relocate", 0.2))


class _LiveState:
    """Mutable packing with incremental k-fold checks for the local search."""

    def __init__(self, k: int):
        self.k = k
        self.slots: dict[int, Point] = {}
        self.cells: dict[tuple[int, int], set[int]] = defaultdict(set)
        self.next_id = 0
        self.used: Counter[Point] = Counter()

    def _overlapping(self, o: Point, skip: int | None = None) -> list[int]:
        cx, cy = floor(o.x), floor(o.y)
        s = o.x + o.y
        out = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for j in self.cells.get((cx + dx, cy + dy), ()):
                    if j == skip:
                        continue
                    q = self.slots[j]
                    # pairwise gap: min sum + 1 > max x + max y
                    if min(s, q.x + q.y) + 1 > max(o.x, q.x) + max(o.y, q.y):
                        out.append(j)
        return sorted(out)

    def fits(self, o: Point, skip: int | None = None) -> bool:
        nbrs = self._overlapping(o, skip)
        if len(nbrs) < self.k:
            return True
        # the current state is valid, so only sets containing o can fail
        return not _involves_first([o] + [self.slots[j] for j in nbrs], self.k)

    def add(self, o: Point) -> int:
        i = self.next_id
        self.next_id += 1
        self.slots[i] = o
        self.used[o] += 1
        self.cells[(floor(o.x), floor(o.y))].add(i)
        return i

    def remove(self, i: int) -> Point:
        o = self.slots.pop(i)
        self.used[o] -= 1
        if not self.used[o]:
            del self.used[o]
        self.cells[(floor(o.x), floor(o.y))].discard(i)
        return o


def _involves_first(offsets: list[Point], k: int) -> bool:
    """Whether some (k+1)-set containing index 0 shares an interior point."""
    rest = offsets[1:]

    def extend(size: int, start: int, mx, my, ms) -> bool:
        if size == k + 1:
            return True
        for idx in range(start, len(rest)):
            if size + len(rest) - idx < k + 1:
                return False
            o = rest[idx]
            nx, ny, ns = max(mx, o.x), max(my, o.y), min(ms, o.x + o.y)
            if ns + 1 > nx + ny and extend(size + 1, idx + 1, nx, ny, ns):
                return True
        return False

    f = offsets[0]
    return extend(1, 0, f.x, f.y, f.x + f.y)


def search(k: int, l: int, seed: int, iterations: int, allow_duplicates: bool = False) -> PackingInstance:
    """Seeded local search for dense valid k-fold packings of the l-window.

    Moves are drawn with fixed weights: insert a triangle at a random grid
    offset, jiggle one by at most two grid steps per axis, or relocate one to a
    random offset.  A move is kept iff the result is still a valid k-fold
    packing (and, unless ``allow_duplicates``, still normal); there is no
    other acceptance rule.  Offsets live on the grid (1/SEARCH_DENOM) Z^2.
    """
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    rng = random.Random(seed)
    D = SEARCH_DENOM
    top = (l - 1) * D
    state = _LiveState(k)
    names = [m for m, _ in _MOVES]
    weights = [w for _, w in _MOVES]

    def rand_offset() -> Point:
        return Point(Q(rng.randint(0, top), D), Q(rng.randint(0, top), D))

    for _ in range(iterations):
        move = rng.choices(names, weights)[0]
        if move == "insert" or not state.slots:
            o = rand_offset()
            if (allow_duplicates or o not in state.used) and state.fits(o):
                state.add(o)
            continue
        i = rng.choice(sorted(state.slots))
        old = state.slots[i]
        if move == "jiggle":
            nx = old.x + Q(rng.randint(-2, 2), D)
            ny = old.y + Q(rng.randint(-2, 2), D)
            if not (0 <= nx <= l - 1 and 0 <= ny <= l - 1):
                continue
            o = Point(nx, ny)
        else:
            o = rand_offset()
        if o == old or (not allow_duplicates and o in state.used):
            continue
        if state.fits(o, skip=i):
            state.remove(i)
            state.add(o)
    offsets = [state.slots[i] for i in sorted(state.slots)]
    return PackingInstance(k, l, tuple(offsets))


def describe(p: PackingInstance) -> str:
    rep = window_density(p)
    return (
        f"k={p.k} l={p.l} N={p.N} density={fmt(rep.window_density)} "
        f"bound={fmt(rep.bound)} slack={fmt(rep.slack)}"
    )


def translate_instance(p: PackingInstance, shift: Iterable) -> PackingInstance:
    dx, dy = (Q(s) for s in shift)
    return PackingInstance(p.k, p.l, tuple(Point(o.x + dx, o.y + dy) for o in p.offsets))
