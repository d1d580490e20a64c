"""P(gamma = 2) for an arbitrary continuous model inside one interval."""
from __future__ import annotations

import math

import numpy as np

from .core import PcdParams
from .dists import DistributionModel
from .errors import BadSampleSize, UnsupportedSupport
from .quadrature import CaseIntegrals, gamma2_cases, gamma2_cases_gauss


def _unit_callables(model: DistributionModel, y1: float, y2: float, vector: bool = False):
    a, b = model.support
    if a < y1 or b > y2:
        raise UnsupportedSupport(
            f"support {model.support} is not inside the reference interval ({y1}, {y2})")
    w = y2 - y1
    pdf, cdf = model.pdf, model.cdf

    if vector:
        return (lambda t: w * np.asarray(pdf(y1 + w * t), dtype=float),
                lambda t: np.asarray(cdf(y1 + w * t), dtype=float))

    def f(t):
        return w * float(pdf(y1 + w * t))

    def F(t):
        return float(cdf(y1 + w * t))
    return f, F


def p_numeric_cases(model: DistributionModel, params: PcdParams, n: int,
                    y: tuple[float, float] = (0.0, 1.0), method: str = "adaptive",
                    order: int = 40) -> CaseIntegrals:
    """Case integrals; ``method`` is "adaptive" (scipy quad) or "gauss"
    (fixed vectorized rule, faster, for smooth densities)."""
    if int(n) != n or n < 1:
        raise BadSampleSize(f"sample size must be a positive integer, got {n}")
    if method == "gauss":
        f, F = _unit_callables(model, *y, vector=True)
        return gamma2_cases_gauss(int(n), params.r, params.c, f, F, order)
    f, F = _unit_callables(model, *y)
    return gamma2_cases(int(n), params.r, params.c, f, F)


def p_numeric_general(model: DistributionModel, params: PcdParams, n: int,
                      y: tuple[float, float] = (0.0, 1.0), method: str = "adaptive") -> float:
    """P(gamma_{n,2} = 2) for X_i iid from ``model`` and Y = {y1, y2}."""
    if n == 1:
        return 0.0
    v = p_numeric_cases(model, params, n, y, method).value
    return min(1.0, max(0.0, v))


def mean_variance_gamma(model: DistributionModel, params: PcdParams, n: int,
                        y: tuple[float, float] = (0.0, 1.0)) -> tuple[float, float]:
    p = p_numeric_general(model, params, n, y)
    return 1.0 + p, p * (1.0 - p)


def mean_variance_from_p(p: float) -> tuple[float, float]:
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError("p must lie in [0, 1]")
    return 1.0 + p, p * (1.0 - p)
