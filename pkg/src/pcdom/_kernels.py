"""Hot loops for the Monte Carlo engine.

Two interchangeable implementations are kept: numba-compiled loops and a
vectorized numpy fallback.  ``PCDOM_KERNEL=numpy`` forces the fallback;
without numba installed it is used automatically.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:                                      # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kw):
        def wrap(fn):
            fn.py_func = fn
            return fn
        return wrap(args[0]) if args and callable(args[0]) else wrap


def backend() -> str:
    want = os.environ.get("PCDOM_KERNEL", "").strip().lower()
    if want == "numpy" or not HAVE_NUMBA:
        return "numpy"
    return "numba"


# ------------------------------------------------------------------ extremes

@njit(cache=True, nogil=True)
def _split_extremes_nb(u, split, mn, mx, lo_max, hi_min):
    R, n = u.shape
    for i in range(R):
        a = np.inf
        b = -np.inf
        lm = -np.inf
        hm = np.inf
        for j in range(n):
            v = u[i, j]
            if v < a:
                a = v
            if v > b:
                b = v
            if v <= split:
                if v > lm:
                    lm = v
            elif v < hm:
                hm = v
        mn[i] = a
        mx[i] = b
        lo_max[i] = lm
        hi_min[i] = hm


def _split_extremes_np(u, split):
    below = u <= split
    mn = u.min(axis=1)
    mx = u.max(axis=1)
    lo_max = np.where(below, u, -np.inf).max(axis=1)
    hi_min = np.where(below, np.inf, u).min(axis=1)
    return mn, mx, lo_max, hi_min


def split_extremes(u: np.ndarray, split: float, kernel: str | None = None):
    """Per row: min, max, largest value <= split, smallest value > split
    (-inf / +inf when the side is empty)."""
    u = np.ascontiguousarray(u, dtype=np.float64)
    kernel = kernel or backend()
    if kernel == "numpy":
        return _split_extremes_np(u, split)
    R = u.shape[0]
    out = [np.empty(R) for _ in range(4)]
    _split_extremes_nb(u, float(split), *out)
    return tuple(out)


def gamma_from_extremes(mn, mx, lo_max, hi_min, lo, hi, r):
    """gamma in {1, 2} for one occupied middle interval (lo, hi)."""
    one = np.isneginf(lo_max) | np.isposinf(hi_min)
    if not np.isinf(r):
        with np.errstate(invalid="ignore"):
            one |= mx - lo < r * (lo_max - lo)
            one |= hi - mn < r * (hi - hi_min)
    else:
        one[:] = True
    return np.where(one, 1, 2).astype(np.int64)


# ------------------------------------------------------------------ full rows

@njit(cache=True, nogil=True)
def _gamma_rows_nb(x, y, r, c, out):
    R, n = x.shape
    m = y.shape[1]
    cnt = np.zeros(m + 1, dtype=np.int64)
    mn = np.empty(m + 1)
    mx = np.empty(m + 1)
    lm = np.empty(m + 1)
    hm = np.empty(m + 1)
    rinf = np.isinf(r)
    for i in range(R):
        for k in range(m + 1):
            cnt[k] = 0
            mn[k] = np.inf
            mx[k] = -np.inf
            lm[k] = -np.inf
            hm[k] = np.inf
        for j in range(n):
            v = x[i, j]
            # number of reference points below v
            lo = 0
            hi = m
            while lo < hi:
                mid = (lo + hi) // 2
                if y[i, mid] < v:
                    lo = mid + 1
                else:
                    hi = mid
            k = lo
            cnt[k] += 1
            if v < mn[k]:
                mn[k] = v
            if v > mx[k]:
                mx[k] = v
            if 0 < k < m:
                ctr = y[i, k - 1] + c * (y[i, k] - y[i, k - 1])
                if v <= ctr:
                    if v > lm[k]:
                        lm[k] = v
                elif v < hm[k]:
                    hm[k] = v
        g = 0
        if cnt[0] > 0:
            g += 1
        if cnt[m] > 0:
            g += 1
        for k in range(1, m):
            if cnt[k] == 0:
                continue
            if lm[k] == -np.inf or hm[k] == np.inf or rinf:
                g += 1
                continue
            a = y[i, k - 1]
            b = y[i, k]
            if mx[k] - a < r * (lm[k] - a) or b - mn[k] < r * (b - hm[k]):
                g += 1
            else:
                g += 2
        out[i] = g


def _gamma_rows_np(x, y, r, c):
    R, n = x.shape
    m = y.shape[1]
    cell = (x[:, :, None] > y[:, None, :]).sum(axis=2)
    g = (cell == 0).any(axis=1).astype(np.int64) + (cell == m).any(axis=1)
    for k in range(1, m):
        lo = y[:, k - 1][:, None]
        hi = y[:, k][:, None]
        inside = cell == k
        ctr = lo + c * (hi - lo)
        left = inside & (x <= ctr)
        right = inside & (x > ctr)
        occ = inside.any(axis=1)
        lm = np.where(left, x, -np.inf).max(axis=1)
        hm = np.where(right, x, np.inf).min(axis=1)
        mn = np.where(inside, x, np.inf).min(axis=1)
        mx = np.where(inside, x, -np.inf).max(axis=1)
        gk = gamma_from_extremes(mn, mx, lm, hm, lo[:, 0], hi[:, 0], r)
        g += np.where(occ, gk, 0)
    return g


def gamma_rows(x: np.ndarray, y: np.ndarray, r: float, c: float,
               kernel: str | None = None) -> np.ndarray:
    """Domination number per row for points ``x`` (R, n) and sorted reference
    rows ``y`` (R, m)."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    kernel = kernel or backend()
    if kernel == "numpy":
        return _gamma_rows_np(x, y, float(r), float(c))
    out = np.empty(x.shape[0], dtype=np.int64)
    _gamma_rows_nb(x, y, float(r), float(c), out)
    return out
