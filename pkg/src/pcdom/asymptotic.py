"""Limits of P(gamma = 2) as n grows, for uniform and general models."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import PcdParams
from .dists import DistributionModel, UniformModel
from .errors import BadParameter, OrderDetectionFailed

K_MAX = 4
ZERO_TOL = 1e-12
DELTAS = tuple(10.0 ** -j for j in range(3, 13))
CAUCHY_TOL = 1e-3


@dataclass(frozen=True)
class AsymptoticResult:
    limit_p: float
    law: str                          # point-mass-1 | point-mass-2 | one-plus-bernoulli
    regime: str = ""
    order: int | None = None          # k or l of the derivative criterion
    rate_exponent: Fraction | None = None
    rate_constant: float | None = None

    @property
    def degenerate(self) -> bool:
        return self.limit_p in (0.0, 1.0)

    def as_dict(self) -> dict:
        return {"p": self.limit_p, "law": self.law, "regime": self.regime,
                "order": self.order,
                "rate": None if self.rate_exponent is None else str(self.rate_exponent),
                "rate_constant": self.rate_constant}


def _law(p: float) -> str:
    if p == 0.0:
        return "point-mass-1"
    if p == 1.0:
        return "point-mass-2"
    return "one-plus-bernoulli"


def _result(p, regime, order=None, const=None):
    expo = None if order is None else Fraction(order + 2, order + 1)
    return AsymptoticResult(p, _law(p), regime, order, expo, const)


def asymptotic_uniform(params: PcdParams, rel_tol: float = 1e-12) -> AsymptoticResult:
    r, c = params.r, params.c
    if c in (0.0, 1.0):
        return _result(0.0, "c at an end point")
    if r == 2.0 and c == 0.5:
        return _result(4.0 / 9.0, "(2,1/2)", 0)
    if math.isinf(r):
        return _result(0.0, "r > 1/tau")
    crit = 1.0 / params.tau
    if math.isclose(r, crit, rel_tol=rel_tol, abs_tol=0.0):
        return _result(r / (r + 1.0), "r = 1/tau", 0)
    if r > crit:
        return _result(0.0, "r > 1/tau")
    return _result(1.0, "r < 1/tau")


def _ratio(a, b, w):
    den = a + w * b
    return a / den


def _delta_limit(model, k, p1, s1, p2, s2, w):
    """Ratio f(p1 + s1 d)/(f(p1 + s1 d) + w f(p2 + s2 d)) as d -> 0.

    The sequence is accelerated with Aitken's delta-squared; the limit is
    accepted once successive accelerated values agree within CAUCHY_TOL.
    A side whose derivative stays bounded while the other diverges gives an
    exact 0 or 1.
    """
    vals, tops, bots = [], [], []
    for d in DELTAS:
        a = model.derivative(k, p1 + s1 * d, "right" if s1 > 0 else "left")
        b = model.derivative(k, p2 + s2 * d, "right" if s2 > 0 else "left")
        tops.append(abs(a))
        bots.append(abs(b))
        vals.append(_ratio(a, b, w))
    grow_a = tops[-1] > 1e3 * max(tops[0], 1e-300)
    grow_b = bots[-1] > 1e3 * max(bots[0], 1e-300)
    if grow_a and not grow_b:
        return 1.0
    if grow_b and not grow_a:
        return 0.0
    acc = []
    for i in range(len(vals) - 2):
        x0, x1, x2 = vals[i:i + 3]
        den = x2 - 2 * x1 + x0
        acc.append(x2 - (x2 - x1) ** 2 / den if den != 0 else x2)
    for u, v in zip(acc, acc[1:]):
        if abs(u - v) < CAUCHY_TOL:
            return min(1.0, max(0.0, acc[-1]))
    raise OrderDetectionFailed("delta sequence did not settle")


def _order_limit(model, base, p1, s1, p2, s2, k_max=K_MAX):
    """Shared scan for the smallest order k with a nonvanishing combination."""
    side1 = "right" if s1 > 0 else "left"
    side2 = "right" if s2 > 0 else "left"
    for k in range(k_max + 1):
        w = base ** (-(k + 1))
        a = model.derivative(k, p1, side1)
        b = model.derivative(k, p2, side2)
        if math.isinf(a) or math.isinf(b):
            return _delta_limit(model, k, p1, s1, p2, s2, w), k
        if abs(a + w * b) > ZERO_TOL:
            if abs(a) <= ZERO_TOL:
                return 0.0, k
            if abs(b) <= ZERO_TOL:
                return 1.0, k
            return a / (a + w * b), k
        if abs(a) > ZERO_TOL or abs(b) > ZERO_TOL:
            raise OrderDetectionFailed(
                f"order {k}: derivatives cancel without vanishing individually")
    raise OrderDetectionFailed(f"no qualifying derivative order up to {k_max}")


def _support_ends(model: DistributionModel, y):
    if y is None:
        return getattr(model, "reference", model.support)
    return y


def asymptotic_general_left(model: DistributionModel, r: float,
                            y: tuple[float, float] | None = None) -> AsymptoticResult:
    """Limit at c = (r-1)/r, governed by right derivatives at y1 and at the center."""
    if not 1.0 < r < 2.0:
        raise BadParameter(f"r must lie in (1, 2), got {r}")
    y1, y2 = _support_ends(model, y)
    mid = y1 + (r - 1.0) * (y2 - y1) / r
    p, k = _order_limit(model, r, y1, 1.0, mid, 1.0)
    return _result(p, "c = (r-1)/r", k)


def asymptotic_general_right(model: DistributionModel, r: float,
                             y: tuple[float, float] | None = None) -> AsymptoticResult:
    """Limit at c = 1/r, governed by left derivatives at y2 and at the center."""
    if not 1.0 < r < 2.0:
        raise BadParameter(f"r must lie in (1, 2), got {r}")
    y1, y2 = _support_ends(model, y)
    mid = y1 + (y2 - y1) / r
    p, l = _order_limit(model, r, y2, -1.0, mid, -1.0)
    return _result(p, "c = 1/r", l)


def asymptotic_cccd(model: DistributionModel,
                    y: tuple[float, float] | None = None) -> AsymptoticResult:
    """Limit at (r, c) = (2, 1/2): product of a left-end and a right-end ratio."""
    y1, y2 = _support_ends(model, y)
    mid = 0.5 * (y1 + y2)
    pl, k = _order_limit(model, 2.0, y1, 1.0, mid, 1.0)
    pr, l = _order_limit(model, 2.0, y2, -1.0, mid, -1.0)
    return _result(pl * pr, "(2,1/2)", max(k, l))


def rate_constants(model: DistributionModel, r: float, side: str = "left", n: int | None = None,
                   y: tuple[float, float] | None = None) -> AsymptoticResult:
    """Order, rate exponent (k+2)/(k+1) and the constant kappa built from
    s1, s2, s3 (left) or q1, q2, q3 (right).  The s/q terms carry explicit
    factors of n; with ``n=None`` they are evaluated at n = 1."""
    nn = 1 if n is None else int(n)
    if side == "left":
        res = asymptotic_general_left(model, r, y)
        y1, _ = _support_ends(model, y)
        k = res.order
        s1 = model.derivative(k, y1, "right") / (nn ** (k + 1) * math.factorial(k))
        s2 = model.derivative(k + 1, y1, "right") / (nn * math.factorial(k + 1))
        s3 = res.limit_p / math.factorial(k + 1)
        if s3 == 0 or not all(map(math.isfinite, (s1, s2))):
            kappa = None
        else:
            kappa = ((s1 * s3 ** (1 / (k + 1)) + s2 * math.gamma((k + 2) / (k + 1)))
                     / ((k + 1) * s3 ** ((k + 2) / (k + 1))))
    elif side == "right":
        res = asymptotic_general_right(model, r, y)
        _, y2 = _support_ends(model, y)
        l = res.order
        q1 = (-1) ** (l + 1) * model.derivative(l + 1, y2, "left") / (nn * math.factorial(l + 1))
        q2 = (-1) ** l * model.derivative(l, y2, "left") / (nn ** (l + 1) * math.factorial(l))
        q3 = (-1) ** (l + 1) * res.limit_p / math.factorial(l + 1)
        if q3 == 0 or not all(map(math.isfinite, (q1, q2))):
            kappa = None
        else:
            # fractional powers of a negative q3 are taken on |q3| with its sign
            mag = abs(q3)
            sg = math.copysign(1.0, q3)
            kappa = ((q1 * math.gamma((l + 2) / (l + 1)) + q2 * sg * mag ** (1 / (l + 1)))
                     / ((l + 1) * sg * mag ** ((l + 2) / (l + 1))))
    else:
        raise BadParameter("side must be 'left' or 'right'")
    return AsymptoticResult(res.limit_p, res.law, res.regime, res.order,
                            res.rate_exponent, kappa)


def uniform_is_left_consistent(r: float) -> bool:
    """Helper for the general/uniform consistency check."""
    a = asymptotic_general_left(UniformModel(), r).limit_p
    b = asymptotic_uniform(PcdParams(r, (r - 1) / r)).limit_p
    return math.isclose(a, b, rel_tol=1e-12)


def same_derivative_limit(k: int, r: float) -> float:
    """1 / (1 + r^-(k+1)), the limit when both critical derivatives agree."""
    return 1.0 / (1.0 + r ** (-(k + 1)))
