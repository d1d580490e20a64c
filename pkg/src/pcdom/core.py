"""Intervalization, proportional-edge proximity regions, catch digraphs and
their domination number.

Conventions
-----------
* ``r = math.inf`` stands for the unbounded expansion; the region is then the
  whole cell.
* A point exactly at a cell center uses the left branch.
* Region membership is strict (open intervals), compared in plain floating
  point.  A vertex always dominates itself (closed neighbourhoods), which
  matters for ``r = 1`` where ``x`` is not inside its own open region.
"""
from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (BadParameter, CoincidentPoint, DegenerateReference,
                     EmptyCell, EmptyReference, OracleTooLarge, OutOfInterval,
                     WrongSpecialization)

INF = math.inf


@dataclass(frozen=True)
class PcdParams:
    r: float
    c: float

    def __post_init__(self):
        r, c = float(self.r), float(self.c)
        if math.isnan(r) or r < 1:
            raise BadParameter(f"expansion parameter must be >= 1, got {self.r}")
        if math.isnan(c) or not 0.0 <= c <= 1.0:
            raise BadParameter(f"centrality parameter must lie in [0,1], got {self.c}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "c", c)

    @property
    def r_is_inf(self) -> bool:
        return math.isinf(self.r)

    @property
    def tau(self) -> float:
        return max(self.c, 1.0 - self.c)


@dataclass(frozen=True)
class Intervalization:
    """Partition of the real line induced by sorted reference points."""
    y_sorted: tuple

    @property
    def m(self) -> int:
        return len(self.y_sorted)

    @property
    def intervals(self) -> list[tuple[float, float]]:
        edges = (-INF,) + self.y_sorted + (INF,)
        return [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]

    def is_end(self, i: int) -> bool:
        return i == 0 or i == self.m

    def centers(self, c: float) -> list[float]:
        y = self.y_sorted
        return [y[i] + c * (y[i + 1] - y[i]) for i in range(len(y) - 1)]

    def center(self, i: int, c: float) -> float | None:
        """Center of interval ``i`` (None for the two end intervals)."""
        if self.is_end(i):
            return None
        lo, hi = self.y_sorted[i - 1], self.y_sorted[i]
        return lo + c * (hi - lo)

    def locate(self, x: float) -> int:
        j = bisect.bisect_left(self.y_sorted, x)
        if j < self.m and self.y_sorted[j] == x:
            raise CoincidentPoint(f"point {x} coincides with a reference point")
        return j


def intervalize(y_points: Sequence[float]) -> Intervalization:
    ys = [float(v) for v in y_points]
    if not ys:
        raise EmptyReference("at least one reference point is required")
    if not all(math.isfinite(v) for v in ys):
        raise BadParameter("reference points must be finite")
    ys.sort()
    for a, b in zip(ys, ys[1:]):
        if a == b:
            raise DegenerateReference(f"duplicate reference point {a}")
    return Intervalization(tuple(ys))


@dataclass(frozen=True)
class ProximityRegion:
    lo: float
    hi: float
    kind: str = "open-interval"     # or "singleton"

    def __contains__(self, z) -> bool:
        if self.kind == "singleton":
            return z == self.lo
        return self.lo < z < self.hi

    @property
    def length(self) -> float:
        return 0.0 if self.kind == "singleton" else self.hi - self.lo


def proximity_region(x: float, interval: tuple[float, float], center: float | None,
                     params: PcdParams) -> ProximityRegion:
    """N(x, r, c) restricted to ``interval``.

    ``center`` is None for the two unbounded end intervals, where the region
    grows from the adjacent reference point and c plays no role.
    """
    lo, hi = interval
    if not lo <= x <= hi:
        raise OutOfInterval(f"{x} is outside [{lo}, {hi}]")
    if x == lo or x == hi:
        return ProximityRegion(x, x, "singleton")
    r = params.r
    if params.r_is_inf:
        return ProximityRegion(lo, hi)
    if math.isinf(lo):
        return ProximityRegion(hi - r * (hi - x), hi)
    if math.isinf(hi):
        return ProximityRegion(lo, lo + r * (x - lo))
    if center is None:
        raise BadParameter("middle intervals need a center")
    if x <= center:
        return ProximityRegion(lo, min(lo + r * (x - lo), hi))
    return ProximityRegion(max(hi - r * (hi - x), lo), hi)


@dataclass(frozen=True)
class CatchDigraph:
    x_points: tuple
    y_points: tuple
    params: PcdParams
    grid: Intervalization
    cell: tuple                     # interval index of every vertex
    out: tuple                      # out[i] = sorted tuple of j != i with x_j in N(x_i)

    @property
    def n(self) -> int:
        return len(self.x_points)

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, nb in enumerate(self.out) for j in nb]

    def region(self, i: int) -> ProximityRegion:
        k = self.cell[i]
        return proximity_region(self.x_points[i], self.grid.intervals[k],
                                self.grid.center(k, self.params.c), self.params)

    def members(self) -> dict[int, list[int]]:
        """Vertex indices grouped by interval index (only occupied ones)."""
        groups: dict[int, list[int]] = {}
        for i, k in enumerate(self.cell):
            groups.setdefault(k, []).append(i)
        return groups


def build_digraph(x_points: Sequence[float], y_points: Sequence[float],
                  params: PcdParams) -> CatchDigraph:
    grid = intervalize(y_points)
    xs = tuple(float(v) for v in x_points)
    if not all(math.isfinite(v) for v in xs):
        raise BadParameter("points must be finite")
    cell = tuple(grid.locate(v) for v in xs)
    out: list[tuple] = [()] * len(xs)
    groups: dict[int, list[int]] = {}
    for i, k in enumerate(cell):
        groups.setdefault(k, []).append(i)
    r = params.r
    for k, idx in groups.items():
        idx = sorted(idx, key=lambda i: xs[i])
        coords = [xs[i] for i in idx]
        lo, hi = grid.intervals[k]
        ctr = grid.center(k, params.c)
        if params.r_is_inf:
            for i in idx:
                out[i] = tuple(sorted(j for j in idx if j != i))
            continue
        # membership is decided on distances to the anchoring end point,
        # x_j - lo < r (x_i - lo) or hi - x_j < r (hi - x_i), which avoids
        # the cancellation in forming the region end point
        d_lo = [v - lo for v in coords] if math.isfinite(lo) else None
        d_hi = [hi - v for v in reversed(coords)] if math.isfinite(hi) else None
        for i in idx:
            # right end cell and left half of a middle cell grow from lo
            from_lo = math.isinf(hi) or (math.isfinite(lo) and xs[i] <= ctr)
            if from_lo:
                b = bisect.bisect_left(d_lo, r * (xs[i] - lo))
                sel = idx[:b]
            else:
                b = bisect.bisect_left(d_hi, r * (hi - xs[i]))
                sel = idx[len(idx) - b:]
            out[i] = tuple(sorted(j for j in sel if j != i))
    return CatchDigraph(xs, grid.y_sorted, params, grid, cell, tuple(out))


@dataclass(frozen=True)
class Gamma1Piece:
    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = False

    def __contains__(self, z) -> bool:
        above = z >= self.lo if self.lo_closed else z > self.lo
        below = z <= self.hi if self.hi_closed else z < self.hi
        return above and below


def _piece(lo, hi, lo_closed, hi_closed, cell):
    a, b = cell
    if lo <= a:
        lo, lo_closed = a, False
    if hi >= b:
        hi, hi_closed = b, False
    if lo < hi or (lo == hi and lo_closed and hi_closed):
        return Gamma1Piece(lo, hi, lo_closed, hi_closed)
    return None


def gamma1_region(x_interval_points: Sequence[float], interval: tuple[float, float],
                  center: float, params: PcdParams) -> list[Gamma1Piece]:
    """Locations whose region would contain every point of the cell.

    Returned as at most two pieces, (Y_i + (max-Y_i)/r, M] and
    [M, Y_{i+1} - (Y_{i+1}-min)/r); when both are present they are merged.
    """
    pts = list(x_interval_points)
    if not pts:
        raise EmptyCell("Gamma1 region needs at least one point")
    lo, hi = interval
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise BadParameter("Gamma1 region is defined for bounded cells")
    if params.r_is_inf:
        return [Gamma1Piece(lo, hi)]
    r = params.r
    left_end = lo + (max(pts) - lo) / r
    right_end = hi - (hi - min(pts)) / r
    left = _piece(left_end, center, False, True, interval)
    right = _piece(center, right_end, True, False, interval)
    if left and right:
        return [Gamma1Piece(left.lo, right.hi, left.lo_closed, right.hi_closed)]
    return [p for p in (left, right) if p is not None]


@dataclass(frozen=True)
class DominationOutcome:
    gamma: int
    per_interval: tuple             # (interval index, n_i, gamma_i)
    witness_set: tuple              # coordinates


def _middle_cell(lo, hi, ctr, coords, params: PcdParams):
    """gamma and witness coordinates for one occupied middle interval."""
    left = [u for u in coords if u <= ctr]
    right = [u for u in coords if u > ctr]
    if not left:
        return 1, (min(right),)
    if not right:
        return 1, (max(left),)
    xm, xp = max(left), min(right)
    if params.r_is_inf:
        return 1, (xm,)
    r = params.r
    if max(right) - lo < r * (xm - lo):
        return 1, (xm,)
    if hi - min(left) < r * (hi - xp):
        return 1, (xp,)
    return 2, (xm, xp)


def _assemble(g: CatchDigraph, cell_fn) -> DominationOutcome:
    groups = g.members()
    per, wit, total = [], [], 0
    for k in sorted(groups):
        coords = [g.x_points[i] for i in groups[k]]
        gk, w = cell_fn(k, coords)
        per.append((k, len(coords), gk))
        wit.extend(w)
        total += gk
    return DominationOutcome(total, tuple(per), tuple(wit))


def domination_number(g: CatchDigraph) -> DominationOutcome:
    """Exact domination number in linear time per cell.

    End intervals always need one vertex: the point farthest from the
    adjacent reference point reaches all others.  A middle interval needs
    one vertex if the point just left of the center or the point just right
    of it reaches every point, otherwise those two points together suffice.
    The data points are assumed distinct (ties have probability zero).
    """
    grid = g.grid

    def cell_fn(k, coords):
        if k == 0:
            return 1, (min(coords),)
        if k == grid.m:
            return 1, (max(coords),)
        lo, hi = grid.intervals[k]
        return _middle_cell(lo, hi, grid.center(k, g.params.c), coords, g.params)

    return _assemble(g, cell_fn)


def domination_number_r1(g: CatchDigraph) -> DominationOutcome:
    """Specialization for r = 1: one vertex per occupied end interval plus
    one per occupied half cell."""
    if g.params.r != 1.0:
        raise WrongSpecialization("domination_number_r1 requires r = 1")
    grid = g.grid

    def cell_fn(k, coords):
        if k == 0:
            return 1, (min(coords),)
        if k == grid.m:
            return 1, (max(coords),)
        ctr = grid.center(k, g.params.c)
        left = [u for u in coords if u <= ctr]
        right = [u for u in coords if u > ctr]
        w = ((max(left),) if left else ()) + ((min(right),) if right else ())
        return len(w), w

    return _assemble(g, cell_fn)


def closed_neighborhood_masks(g: CatchDigraph) -> list[int]:
    return [(1 << i) | sum(1 << j for j in nb) for i, nb in enumerate(g.out)]


def brute_force_domination(g: CatchDigraph, cap: int = 16) -> DominationOutcome:
    """Exhaustive minimum dominating set, smallest subsets first."""
    n = g.n
    if n > cap:
        raise OracleTooLarge(f"{n} vertices exceeds the oracle cap {cap}")
    masks = closed_neighborhood_masks(g)
    full = (1 << n) - 1
    best: tuple = ()
    if n:
        for k in range(1, n + 1):
            hit = None
            for sub in itertools.combinations(range(n), k):
                acc = 0
                for i in sub:
                    acc |= masks[i]
                if acc == full:
                    hit = sub
                    break
            if hit is not None:
                best = hit
                break
    counts: dict[int, list[int]] = {}
    for i, kcell in enumerate(g.cell):
        counts.setdefault(kcell, [0, 0])[0] += 1
    for i in best:
        counts[g.cell[i]][1] += 1
    per = tuple((k, v[0], v[1]) for k, v in sorted(counts.items()))
    return DominationOutcome(len(best), per, tuple(g.x_points[i] for i in best))


def dominates(g: CatchDigraph, witness: Sequence[float]) -> bool:
    """True when the closed neighbourhoods of the witness coordinates cover
    every vertex."""
    index = {}
    for i, v in enumerate(g.x_points):
        index.setdefault(v, i)
    masks = closed_neighborhood_masks(g)
    acc = 0
    for w in witness:
        acc |= masks[index[w]]
    return acc == (1 << g.n) - 1


def occupancy_counts(g: CatchDigraph) -> tuple[int, int, int]:
    """(k1, k2, k3): middle cells with more than one point, middle cells with
    exactly one point, occupied end cells."""
    k1 = k2 = k3 = 0
    for k, idx in g.members().items():
        if g.grid.is_end(k):
            k3 += 1
        elif len(idx) > 1:
            k1 += 1
        else:
            k2 += 1
    return k1, k2, k3


def gamma_of(x_points, y_points, r: float, c: float) -> int:
    """Convenience wrapper returning only the domination number."""
    return domination_number(build_digraph(x_points, y_points, PcdParams(r, c))).gamma

