"""P(gamma = 2) for uniform data in a single interval: closed forms and a
quadrature oracle.

All closed forms are written with bases of magnitude at most one, so plain
float powers stay accurate for large n (no overflow, underflow only to
values that are genuinely negligible).  Negative bases are raised to
integer powers, which keeps the sign exact.

Regime names
------------
Writing c for min(c, 1-c) and s = (3 - sqrt 5)/2:

* ``pi1``..``pi4`` for c in (s, 1/2), split at 1/c, 1/(1-c), (1-c)/c
* ``theta1``..``theta4`` for c in (0, s], split at 1/c, (1-c)/c, 1/(1-c);
  ``theta3`` is further split at r^2 c - r + 1 = 0 into ``theta3a`` (above)
  and ``theta3b`` (at or below)
* ``nu1``..``nu4`` and ``nu1-low``/``nu4-low`` for r = 2
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import PcdParams
from .errors import BadSampleSize

GOLDEN_C = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class ExactProbability:
    value: float
    regime: str
    n: int

    def __float__(self):
        return self.value


def _check_n(n):
    if int(n) != n or n < 1:
        raise BadSampleSize(f"sample size must be a positive integer, got {n}")
    return int(n)


def _clip(v):
    return min(1.0, max(0.0, v))


def _out(v, regime, n):
    return ExactProbability(0.0 if n == 1 else _clip(v), regime, n)


# ---------------------------------------------------------------- (2, 1/2)

def p_exact_2_half(n: int) -> ExactProbability:
    n = _check_n(n)
    return _out(4.0 / 9.0 - (16.0 / 9.0) * 0.25 ** n, "cccd", n)


# ---------------------------------------------------------------- r = 2

def _nu_low(n, c):
    # valid for 0 < c <= 1/4
    return (2.0 / 3.0) * (c + 0.5) ** n - (2.0 / 3.0) * ((1 - c) / 2) ** n - c ** n


def _nu1(n, c):
    # valid for 1/4 < c <= 1/3
    return ((2.0 / 3.0) * (c + 0.5) ** n - (8.0 / 9.0) * 0.25 ** n
            - (2.0 / 3.0) * ((1 - c) / 2) ** n + (1.0 / 9.0) * (1 - 3 * c) ** n
            - (2.0 / 9.0) * (3 * c - 0.5) ** n)


def _nu2(n, c):
    # valid for 1/3 < c <= 1/2
    return ((2.0 / 3.0) * (c + 0.5) ** n - (8.0 / 9.0) * 0.25 ** n
            - (2.0 / 3.0) * ((1 - c) / 2) ** n - (2.0 / 9.0) * ((3 * c - 1) / 2) ** n
            - (2.0 / 9.0) * (3 * c - 0.5) ** n)


def p_exact_r2_c(n: int, c: float) -> ExactProbability:
    n = _check_n(n)
    c = float(c)
    if c <= 0.0 or c >= 1.0:
        return ExactProbability(0.0, "degenerate-c", n)
    mirrored = c > 0.5
    cc = 1.0 - c if mirrored else c
    if cc <= 0.25:
        v, tag = _nu_low(n, cc), ("nu4-low" if mirrored else "nu1-low")
    elif cc <= 1.0 / 3.0:
        v, tag = _nu1(n, cc), ("nu4" if mirrored else "nu1")
    else:
        v, tag = _nu2(n, cc), ("nu3" if mirrored else "nu2")
    return _out(v, tag, n)


# ---------------------------------------------------------------- c = 1/2

def p_exact_r_half(n: int, r: float) -> ExactProbability:
    n = _check_n(n)
    r = float(r)
    if r < 1:
        raise ValueError("r must be >= 1")
    if math.isinf(r):
        return ExactProbability(0.0, "r=inf", n)
    if r >= 2.0:
        v = 2 * r / (r + 1) ** 2 * ((2 / r) ** (n - 1) - ((r - 1) / r ** 2) ** (n - 1))
        return _out(v, "r>=2", n)
    v = (1.0 - ((1 / (2 * r)) ** (n - 1) + r * (r / 2) ** (n - 1)) / (r + 1)
         + (r - 1) ** n / (r + 1) ** 2 * (1 - ((r - 1) / (2 * r)) ** (n - 1)))
    return _out(v, "1<=r<2", n)


# ---------------------------------------------------------------- general (r, c)

def _pi1(n, r, c):
    return 2 * r / (r + 1) ** 2 * ((2 / r) ** (n - 1) - ((r - 1) / r ** 2) ** (n - 1))


def _pi2(n, r, c):
    h = c * r - 1 + c
    return (r / (r + 1) * (((1 + c * r) / r) ** n - ((1 - c) / r) ** n
                           - ((c * r * r - r + c * r + 1) / r) ** n / (r + 1))
            - r ** 3 / ((r + 1) ** 2 * (r - 1)) * ((r - 1) / r ** 2) ** n
            - r / ((r + 1) ** 2 * (r - 1)) * ((r - 1) * h / r) ** n)


def _pi3(n, r, c):
    h = c * r - 1 + c
    e = r - c * r - c
    return (1 + (r - 1) ** n / (r + 1) ** 2
            - ((r - 1) / r) ** (n - 1) / (r + 1) ** 2 * (h ** n + e ** n)
            - ((c * r) ** n + (r * (1 - c)) ** n
               + r * ((c / r) ** n + ((1 - c) / r) ** n)) / (r + 1))


def _pi4(n, r, c):
    d = 1 - c * (r + 1)
    e = r * (1 - c) - c
    rm = r - 1
    A = 1 + rm ** n - (r * c) ** n - (r * (1 - c)) ** n - (rm * d) ** n
    B = r ** 3 * rm ** (n - 1) / (r + 1) ** 2 * (d ** n - (e / r) ** n)
    C = r / (r + 1) * (-(c / r) ** n - rm ** n + (rm * d) ** n + (r * (1 - c)) ** n
                       - ((1 - c) / r) ** n + (rm * e / r) ** n)
    D = r * r * rm ** n * (1 - d ** n) / (r + 1) ** 2
    E = r / (r + 1) * ((c * r) ** n - rm ** n)
    return A + B + C + D + E


def _theta3a(n, r, c):
    rm = r - 1
    t = rm * (1 - c * (r + 1))
    g = (1 - r + c * r * r + c * r) / r
    return (r ** 3 / ((r + 1) ** 2 * rm) * (t ** n - (rm / r ** 2) ** n)
            + r / (r + 1) * (t ** n - ((1 - c) / r) ** n + ((1 + c * r) / r) ** n - g ** n)
            + r * r / (r + 1) ** 2 * (g ** n - t ** n)
            - t ** n)


def _theta3b(n, r, c):
    return r / (r + 1) * (((1 + c * r) / r) ** n - ((1 - c) / r) ** n) - c ** n


def regime_of(r: float, c: float) -> str:
    """Name of the closed form used at (r, c) after folding c into (0, 1/2)."""
    if c <= 0 or c >= 1:
        return "degenerate-c"
    if math.isinf(r):
        return "r=inf"
    if c == 0.5:
        return "r>=2" if r >= 2 else "1<=r<2"
    cc = min(c, 1 - c)
    if r >= 1 / cc:
        return "theta1" if cc <= GOLDEN_C else "pi1"
    if cc > GOLDEN_C:
        if r >= 1 / (1 - cc):
            return "pi2"
        if r >= (1 - cc) / cc:
            return "pi3"
        return "pi4"
    if r >= (1 - cc) / cc:
        return "theta2"
    if r >= 1 / (1 - cc):
        return "theta3a" if r * r * cc - r + 1 > 0 else "theta3b"
    return "theta4"


_FORMS = {"pi1": _pi1, "theta1": _pi1, "pi2": _pi2, "theta2": _pi2, "pi3": _pi3,
          "pi4": _pi4, "theta4": _pi4, "theta3a": _theta3a, "theta3b": _theta3b}


def p_exact_full(n: int, params: PcdParams | None = None, *, r: float | None = None,
                 c: float | None = None) -> ExactProbability:
    """Closed-form P(gamma = 2) for n uniform points in one interval."""
    n = _check_n(n)
    if params is None:
        params = PcdParams(r, c)
    r, c = params.r, params.c
    if c <= 0.0 or c >= 1.0:
        return ExactProbability(0.0, "degenerate-c", n)
    if math.isinf(r):
        return ExactProbability(0.0, "r=inf", n)
    if c == 0.5:
        return p_exact_r_half(n, r)
    tag = regime_of(r, c)
    cc = min(c, 1.0 - c)
    return _out(_FORMS[tag](n, r, cc), tag, n)


def p_exact(n: int, r: float, c: float) -> float:
    return p_exact_full(n, PcdParams(r, c)).value


def limit_c_to_zero_printed(n: int) -> float:
    """The c -> 0 limit of the r = 2 formula for c <= 1/3 as it is usually
    quoted, 1/9 - (2/9)(-2)^n - (8/9) 4^-n.  Kept for comparison only; the
    true limit of P(gamma = 2) is 0 (see ``p_exact_r2_c`` near 0)."""
    return 1.0 / 9.0 - (2.0 / 9.0) * (-2.0) ** n - (8.0 / 9.0) * 4.0 ** (-n)


def limit_c_to_zero_of_nu1(n: int) -> float:
    """lim_{c->0} of the 1/4 < c <= 1/3 expression, extended below 1/4."""
    return _nu1(n, 0.0)
