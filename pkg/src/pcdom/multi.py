"""Distribution of gamma when the reference set has m points.

Cells are indexed 0..m: cells 0 and m are the two unbounded end intervals,
cells 1..m-1 lie between consecutive reference points.  Given the cell
counts n_i, the cells are independent: an occupied end cell contributes 1,
an occupied middle cell contributes 1 + Bernoulli(p_{n_i}) where p_{n_i} is
the single-interval P(gamma = 2) for the conditional law in that cell.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy import special

from .core import PcdParams
from .dists import ConditionalModel, DistributionModel, UniformModel
from .errors import BadParameter, BadSampleSize, EnumerationTooLarge
from .exact_uniform import p_exact
from .general_f import p_numeric_general

DEFAULT_CAP = 24


# ------------------------------------------------------------------ compositions

def theta(a: int, b: int, S: Iterable[int] | None = None) -> Iterator[tuple[int, ...]]:
    """All b-tuples with entries in S summing to a, in lexicographic order.
    S defaults to {0, ..., a}."""
    if a < 0 or b < 0:
        return
    allowed = sorted(set(range(a + 1) if S is None else S))
    allowed = [s for s in allowed if 0 <= s <= a]
    if b == 0:
        if a == 0:
            yield ()
        return
    lo = allowed[0] if allowed else 0
    hi = allowed[-1] if allowed else 0

    def rec(rest, left, prefix):
        if left == 1:
            if rest in allowed_set:
                yield prefix + (rest,)
            return
        for s in allowed:
            if s > rest:
                break
            if rest - s < lo * (left - 1) or rest - s > hi * (left - 1):
                continue
            yield from rec(rest - s, left - 1, prefix + (s,))

    allowed_set = set(allowed)
    yield from rec(a, b, ())


def theta_count(a: int, b: int, S: Iterable[int] | None = None) -> int:
    """Number of tuples produced by ``theta`` by dynamic programming."""
    if a < 0 or b < 0:
        return 0
    allowed = sorted(set(range(a + 1) if S is None else S))
    ways = [1] + [0] * a
    for _ in range(b):
        nxt = [0] * (a + 1)
        for t, w in enumerate(ways):
            if w:
                for s in allowed:
                    if 0 <= s and t + s <= a:
                        nxt[t + s] += w
        ways = nxt
    return ways[a]


# ------------------------------------------------------------------ result type

@dataclass
class GammaPmf:
    support: list[int]
    probabilities: list[float]
    n: int
    m: int
    params: PcdParams | None = None
    method: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.support) != len(self.probabilities):
            raise ValueError("support and probabilities differ in length")

    def pmf(self, q: int) -> float:
        try:
            return self.probabilities[self.support.index(q)]
        except ValueError:
            return 0.0

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.support, self.probabilities))

    def mean(self) -> float:
        return math.fsum(q * p for q, p in zip(self.support, self.probabilities))

    def variance(self) -> float:
        mu = self.mean()
        return math.fsum((q - mu) ** 2 * p for q, p in zip(self.support, self.probabilities))

    def total(self) -> float:
        return math.fsum(self.probabilities)


def _pmf_from_array(arr, n, m, params, method, keep_zeros=False) -> GammaPmf:
    sup, pr = [], []
    for q, v in enumerate(arr):
        if v > 0 or (keep_zeros and 1 <= q <= min(n, 2 * m)):
            sup.append(q)
            pr.append(float(v))
    return GammaPmf(sup, pr, n, m, params, method)


def _check_nm(n, m):
    if int(n) != n or n < 1:
        raise BadSampleSize(f"n must be a positive integer, got {n}")
    if int(m) != m or m < 1:
        raise BadSampleSize(f"m must be a positive integer, got {m}")
    return int(n), int(m)


# ------------------------------------------------------------------ uniform

@lru_cache(maxsize=4096)
def _p_uniform_cached(k: int, r: float, c: float) -> float:
    return p_exact(k, r, c)


def _cell_law(k: int, end: bool, pfun) -> tuple[float, float, float]:
    """(P(gamma_cell = 0), P(= 1), P(= 2)) for k points in the cell."""
    if k == 0:
        return 1.0, 0.0, 0.0
    if end:
        return 0.0, 1.0, 0.0
    p = pfun(k)
    return 0.0, 1.0 - p, p


def _composition_pmf(counts: Sequence[int], m: int, pfun) -> list[float]:
    out = [1.0]
    for i, k in enumerate(counts):
        law = _cell_law(k, i in (0, m), pfun)
        nxt = [0.0] * (len(out) + 2)
        for g, w in enumerate(out):
            if w:
                for d, v in enumerate(law):
                    if v:
                        nxt[g + d] += w * v
        out = nxt
    return out


def _uniform_enumerate(n, m, params, cap):
    if n + m > cap:
        raise EnumerationTooLarge(f"n + m = {n + m} exceeds the enumeration cap {cap}")
    r, c = params.r, params.c
    pfun = lambda k: _p_uniform_cached(k, r, c)   # noqa: E731
    weight = 1.0 / math.comb(n + m, m)
    # chunks keyed by the count in cell 0; reduced in key order
    chunks: list[list[list[float]]] = []
    for n0 in range(n + 1):
        acc: list[list[float]] = [[] for _ in range(2 * m + 1)]
        for rest in theta(n - n0, m):
            law = _composition_pmf((n0,) + rest, m, pfun)
            for q, v in enumerate(law):
                if v:
                    acc[q].append(v)
        chunks.append(acc)
    arr = [weight * math.fsum(v for ch in chunks for v in ch[q]) for q in range(2 * m + 1)]
    return arr


def _cell_laws(n: int, end: bool, pfun) -> np.ndarray:
    """Rows k = 0..n of ``_cell_law`` as an (n + 1, 3) array."""
    out = np.zeros((n + 1, 3))
    out[0, 0] = 1.0
    if n == 0:
        return out
    if end:
        out[1:, 1] = 1.0
        return out
    p = np.array([pfun(k) for k in range(1, n + 1)], dtype=float)
    out[1:, 1] = 1.0 - p
    out[1:, 2] = p
    return out


def _cells_dp(n, m, cell_weight, pfuns) -> np.ndarray:
    """Sum over count vectors of prod_i cell_weight(i, k_before, k_i) times the
    convolution of cell laws.  ``cell_weight`` takes an array of k values.
    Returns an (2m+1,) array indexed by gamma."""
    width = 2 * m + 1
    W = np.zeros((n + 1, width))
    W[0, 0] = 1.0
    for i in range(m + 1):
        end = i in (0, m)
        laws = _cell_laws(n, end, pfuns[i])
        nxt = np.zeros_like(W)
        last = i == m
        for used in range(n + 1):
            row = W[used]
            if not row.any():
                continue
            # the last cell must take every remaining point
            ks = np.array([n - used]) if last else np.arange(n - used + 1)
            w = np.asarray(cell_weight(i, used, ks), dtype=float)
            for d in range(3):
                v = w * laws[ks, d]
                if v.any():
                    nxt[used + ks, d:] += np.outer(v, row[:width - d])
        W = nxt
    return W[n]


def _uniform_dp(n, m, params):
    r, c = params.r, params.c
    pfun = lambda k: _p_uniform_cached(k, r, c)   # noqa: E731
    arr = _cells_dp(n, m, lambda i, used, k: np.ones(len(k)), [pfun] * (m + 1))
    return arr / math.comb(n + m, m)


def pmf_uniform_multi(n: int, m: int, params: PcdParams, cap: int = DEFAULT_CAP,
                      method: str = "enumerate") -> GammaPmf:
    """Exact pmf of gamma for n iid uniform X and m iid uniform Y on a common
    interval.  Every interleaving of the sorted samples is equally likely, so
    each count vector carries weight n! m! / (n + m)!.

    ``method="enumerate"`` walks the count vectors explicitly (capped at
    n + m <= cap); ``method="dp"`` sums them by dynamic programming over cells
    and has no cap.
    """
    n, m = _check_nm(n, m)
    if method == "enumerate":
        arr = _uniform_enumerate(n, m, params, cap)
    elif method == "dp":
        arr = _uniform_dp(n, m, params)
    else:
        raise BadParameter(f"unknown method {method!r}")
    return _pmf_from_array(arr, n, m, params, method)


# ------------------------------------------------------------------ general models

def _cell_p_function(x_model: DistributionModel, lo: float, hi: float, params: PcdParams,
                     cache: dict):
    r, c = params.r, params.c
    if isinstance(x_model, UniformModel):
        return lambda k: _p_uniform_cached(k, r, c)

    def pfun(k):
        key = (lo, hi, k)
        if key not in cache:
            cond = ConditionalModel(x_model, lo, hi)
            cache[key] = p_numeric_general(cond, params, k, (lo, hi), method="gauss")
        return cache[key]
    return pfun


def conditional_pmf(x_model: DistributionModel, y: Sequence[float], n: int,
                    params: PcdParams, cache: dict | None = None) -> np.ndarray:
    """pmf of gamma (array indexed by q) given the reference points ``y``."""
    ys = np.sort(np.asarray(y, dtype=float))
    m = len(ys)
    cache = {} if cache is None else cache
    cdf = np.concatenate(([0.0], np.asarray(x_model.cdf(ys), dtype=float), [1.0]))
    probs = np.clip(np.diff(cdf), 0.0, 1.0)
    edges = np.concatenate(([-np.inf], ys, [np.inf]))
    pfuns = []
    for i in range(m + 1):
        if 0 < i < m and probs[i] > 0:
            pfuns.append(_cell_p_function(x_model, float(edges[i]), float(edges[i + 1]),
                                          params, cache))
        else:
            pfuns.append(None)
    logp = np.where(probs > 0, np.log(np.where(probs > 0, probs, 1.0)), -np.inf)

    def weight(i, used, k):
        # multinomial factor C(used + k, k) p_i^k, built up cell by cell
        k = np.asarray(k)
        if probs[i] <= 0:
            return (k == 0).astype(float)
        return np.exp(special.gammaln(used + k + 1) - special.gammaln(used + 1)
                      - special.gammaln(k + 1) + k * logp[i])

    return _cells_dp(n, m, weight, pfuns)


def _simplex_rule(m: int, nodes: int):
    """Nodes and weights for E[g(U_(1), ..., U_(m))] over uniform order
    statistics, via the map u_k = u_{k-1} + (1 - u_{k-1}) s_k on [0, 1]^m."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    grids = np.meshgrid(*([x] * m), indexing="ij")
    wgrid = np.ones_like(grids[0])
    for g in np.meshgrid(*([w] * m), indexing="ij"):
        wgrid = wgrid * g
    s = np.stack([g.ravel() for g in grids], axis=1)
    wt = wgrid.ravel() * math.factorial(m)
    u = np.empty_like(s)
    prev = np.zeros(len(s))
    for k in range(m):
        wt = wt * (1.0 - prev)
        u[:, k] = prev + (1.0 - prev) * s[:, k]
        prev = u[:, k]
    return u, wt


def pmf_general_multi(x_model: DistributionModel, y_model, n: int, m: int | None,
                      params: PcdParams, nodes: int = 12, mc_draws: int = 2000,
                      seed: int = 0) -> GammaPmf:
    """pmf of gamma for n iid X from ``x_model`` and m reference points.

    ``y_model`` is a DistributionModel (m iid draws) or a fixed sequence of
    coordinates (a degenerate Y law; m is then its length).  For random Y and
    m <= 3 the order-statistic integral is done with a tensor Gauss-Legendre
    rule of ``nodes`` points per axis; for m > 3 it is replaced by an average
    over ``mc_draws`` sampled reference sets.
    """
    cache: dict = {}
    if not isinstance(y_model, DistributionModel):
        y = np.sort(np.asarray(y_model, dtype=float))
        if m is not None and m != len(y):
            raise BadParameter("m does not match the number of fixed reference points")
        n, m = _check_nm(n, len(y))
        arr = conditional_pmf(x_model, y, n, params, cache)
        return _pmf_from_array(arr, n, m, params, "fixed-y")
    n, m = _check_nm(n, m)
    if m <= 3:
        u, wt = _simplex_rule(m, nodes)
        method = f"gauss-{nodes}"
    else:
        rng = np.random.Generator(np.random.Philox(seed))
        u = np.sort(rng.random((mc_draws, m)), axis=1)
        wt = np.full(mc_draws, 1.0 / mc_draws)
        method = f"mc-y-{mc_draws}"
    ys = np.asarray(y_model.quantile(u), dtype=float)
    total = np.zeros(2 * m + 1)
    for row, w in zip(ys, wt):
        total += w * conditional_pmf(x_model, row, n, params, cache)
    total = np.clip(total, 0.0, None)
    return _pmf_from_array(total, n, m, params, method)


def expected_gamma(x_model: DistributionModel | None, y_model, n: int, m: int | None,
                   params: PcdParams, **kw) -> float:
    """E[gamma].  Uniform/uniform (``x_model`` None or both uniform) uses the
    closed form  2 n/(n+m) + (m-1) sum_k P(N_1 = k)(1 + p_k)  with
    P(N_1 = k) = C(n-k+m-1, m-1)/C(n+m, m); other cases average the pmf."""
    both_uniform = x_model is None or (
        isinstance(x_model, UniformModel) and isinstance(y_model, UniformModel)
        and x_model.support == y_model.support)
    if both_uniform:
        n, m = _check_nm(n, m)
        tot = math.comb(n + m, m)
        ends = 2.0 * n / (n + m) if m >= 1 else 0.0
        mid = math.fsum(math.comb(n - k + m - 1, m - 1) / tot
                        * (1.0 + _p_uniform_cached(k, params.r, params.c))
                        for k in range(1, n + 1)) if m >= 2 else 0.0
        if m == 1:
            return ends
        return ends + (m - 1) * mid
    return pmf_general_multi(x_model, y_model, n, m, params, **kw).mean()


# ------------------------------------------------------------------ limit laws

@dataclass(frozen=True)
class MultiLimitLaw:
    """gamma -> shift + Binomial(trials, p); a point mass when trials == 0
    or p is 0 or 1."""
    shift: int
    trials: int
    p: float
    description: str = ""

    def pmf(self) -> dict[int, float]:
        from scipy import stats
        if self.trials == 0 or self.p in (0.0, 1.0):
            return {self.shift + int(round(self.trials * self.p)): 1.0}
        ks = np.arange(self.trials + 1)
        return {int(self.shift + k): float(v)
                for k, v in zip(ks, stats.binom.pmf(ks, self.trials, self.p))}

    def as_dict(self) -> dict:
        return {"shift": self.shift, "trials": self.trials, "p": self.p,
                "law": self.description}


def asymptotic_multi(m: int, params: PcdParams, model: DistributionModel | None = None,
                     n_fixed: int | None = None) -> MultiLimitLaw:
    """Limit law of gamma as n -> infinity with m fixed.

    Both end cells and all m - 1 middle cells are eventually occupied, so the
    limit is m + 1 + Binomial(m - 1, p) with p the single-interval limit of
    P(gamma = 2).  ``n_fixed`` requests the m -> infinity limit at fixed n,
    which is a point mass at n.
    """
    from .asymptotic import (asymptotic_cccd, asymptotic_general_left,
                             asymptotic_general_right, asymptotic_uniform)
    if n_fixed is not None:
        return MultiLimitLaw(int(n_fixed), 0, 0.0, "m -> infinity at fixed n")
    if int(m) != m or m < 1:
        raise BadSampleSize(f"m must be a positive integer, got {m}")
    m = int(m)
    r, c = params.r, params.c
    if m == 1:
        return MultiLimitLaw(2, 0, 0.0, "two end cells")
    if c in (0.0, 1.0):
        return MultiLimitLaw(m + 1, 0, 0.0, "c at an end point")
    if model is None or isinstance(model, UniformModel):
        p = asymptotic_uniform(params).limit_p
    elif r == 2.0 and c == 0.5:
        p = asymptotic_cccd(model).limit_p
    elif 1.0 < r < 2.0 and math.isclose(c, (r - 1) / r, rel_tol=1e-12):
        p = asymptotic_general_left(model, r).limit_p
    elif 1.0 < r < 2.0 and math.isclose(c, 1 / r, rel_tol=1e-12):
        p = asymptotic_general_right(model, r).limit_p
    else:
        p = asymptotic_uniform(params).limit_p
    return MultiLimitLaw(m + 1, m - 1, float(p), f"{m + 1} + Binomial({m - 1}, p)")
