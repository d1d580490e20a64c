"""Double integral over the extreme order statistics (X_(1), X_(n)) giving
P(gamma = 2) on the unit interval.

With x1 = X_(1), xn = X_(n), a = xn/r and b = (x1 + r - 1)/r, gamma is 2
exactly when x1 <= c < xn, r*x1 <= xn, xn >= b and none of the remaining
n - 2 points falls in the Gamma1 region (min(a, c), max(b, c)).  The
integration domain is cut along xn = r c and x1 = r c - r + 1 into the four
geometric cases

    case 1: a < c < b        (Gamma1 = (a, b))
    case 2: a < c, b <= c    (Gamma1 = (a, c])
    case 3: a >= c, b > c    (Gamma1 = [c, b))
    case 4: a >= c, b <= c   (Gamma1 empty)

and further at every point where one of the lower limits changes, so each
panel has a smooth integrand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import QuadratureFailed

EPSABS = 1e-13
EPSREL = 1e-11
FAIL_ERR = 1e-6


@dataclass
class CaseIntegrals:
    value: float
    cases: dict = field(default_factory=dict)
    abserr: float = 0.0


def _quad(fun, a, b, points=None):
    if not b > a:
        return 0.0, 0.0
    pts = sorted({p for p in (points or ()) if a < p < b})
    out = integrate.quad(fun, a, b, points=pts or None, epsabs=EPSABS,
                         epsrel=EPSREL, limit=200, full_output=1)
    val, err = out[0], out[1]
    if len(out) > 3 and err > FAIL_ERR:
        raise QuadratureFailed(f"quadrature did not converge on ({a}, {b}): {out[3]}")
    return val, err


def gamma2_cases(n: int, r: float, c: float, f=None, F=None) -> CaseIntegrals:
    """Evaluate the four case integrals.  ``f``/``F`` are the pdf and cdf on
    (0, 1) as scalar callables; omit both for the uniform distribution."""
    n = int(n)
    if n < 2 or c <= 0.0 or c >= 1.0 or math.isinf(r):
        return CaseIntegrals(0.0, {1: 0.0, 2: 0.0, 3: 0.0, 4: 0.0})
    k = n - 2
    w = n * (n - 1)
    rc = r * c
    beta = rc - r + 1.0

    if f is None:
        def h(x1, xn):
            a = xn / r
            b = (x1 + r - 1.0) / r
            gap = xn - x1 - (max(b, c) - min(a, c))
            return w * gap ** k if gap > 0 else 0.0
    else:
        def h(x1, xn):
            a = xn / r
            b = (x1 + r - 1.0) / r
            mass = F(xn) - F(x1) - (F(max(b, c)) - F(min(a, c)))
            if mass <= 0:
                return 0.0
            return w * f(x1) * f(xn) * mass ** k

    def lower(x1):
        return max(c, r * x1, (x1 + r - 1.0) / r)

    def inner(x1, case):
        lo = lower(x1)
        if case in (1, 2):
            lo_, hi_ = lo, min(rc, 1.0)
        else:
            lo_, hi_ = max(lo, rc), 1.0
        return _quad(lambda xn: h(x1, xn), lo_, hi_)[0]

    brk = [c / r, beta, 1.0 / (r + 1.0), 1.0 / r, r * r * c - r + 1.0, c]
    cases, err = {}, 0.0
    for case in (1, 2, 3, 4):
        if case in (1, 3):
            a0, b0 = max(0.0, beta), c
        else:
            a0, b0 = 0.0, min(c, beta)
        v, e = _quad(lambda x1: inner(x1, case), a0, b0, brk)
        cases[case] = v
        err += e
    return CaseIntegrals(sum(cases.values()), cases, err)



def gamma2_cases_gauss(n: int, r: float, c: float, f=None, F=None,
                       order: int = 40) -> CaseIntegrals:
    """Same panels as ``gamma2_cases`` but a fixed Gauss-Legendre rule of
    ``order`` nodes per panel and per inner integral, fully vectorized.
    ``f``/``F`` must accept arrays.  Intended for bulk use (many cells);
    accuracy relies on the pdf being smooth inside each panel."""
    n = int(n)
    if n < 2 or c <= 0.0 or c >= 1.0 or math.isinf(r):
        return CaseIntegrals(0.0, {1: 0.0, 2: 0.0, 3: 0.0, 4: 0.0})
    if f is None:
        f = np.ones_like
        F = np.asarray
    k = n - 2
    w = n * (n - 1)
    rc = r * c
    beta = rc - r + 1.0
    gx, gw = np.polynomial.legendre.leggauss(order)
    gx = 0.5 * (gx + 1.0)
    gw = 0.5 * gw
    brk = [c / r, beta, 1.0 / (r + 1.0), 1.0 / r, r * r * c - r + 1.0, c]
    Fc = float(F(np.array(c)))
    cases = {}
    for case in (1, 2, 3, 4):
        if case in (1, 3):
            a0, b0 = max(0.0, beta), c
        else:
            a0, b0 = 0.0, min(c, beta)
        tot = 0.0
        if b0 > a0:
            pts = sorted({a0, b0} | {p for p in brk if a0 < p < b0})
            for p, q in zip(pts, pts[1:]):
                X1 = p + (q - p) * gx
                W1 = (q - p) * gw
                lo = np.maximum(np.maximum(c, r * X1), (X1 + r - 1.0) / r)
                if case in (1, 2):
                    lo_, hi_ = lo, np.full_like(lo, min(rc, 1.0))
                else:
                    lo_, hi_ = np.maximum(lo, rc), np.ones_like(lo)
                width = np.clip(hi_ - lo_, 0.0, None)
                XN = lo_[:, None] + width[:, None] * gx[None, :]
                WN = width[:, None] * gw[None, :]
                x1 = X1[:, None]
                a = XN / r
                b = (x1 + r - 1.0) / r
                Fb = np.where(b > c, F(np.maximum(b, c)), Fc)
                Fa = np.where(a < c, F(np.minimum(a, c)), Fc)
                mass = np.clip(F(XN) - F(x1) - Fb + Fa, 0.0, None)
                H = w * f(x1) * f(XN) * mass ** k
                tot += float(np.sum(W1[:, None] * WN * H))
        cases[case] = tot
    return CaseIntegrals(sum(cases.values()), cases, 0.0)
