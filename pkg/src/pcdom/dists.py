"""Continuous distribution models on a bounded support.

Every model offers vectorized ``pdf``, ``cdf`` and ``quantile`` plus
``derivative(k, x, side)``, the one-sided k-th derivative of the pdf.
Derivatives are analytic where the model allows it; the base class falls
back to one-sided finite differences for k <= 2 only.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import optimize, special

from .core import PcdParams, ProximityRegion, proximity_region
from .errors import BadParameter, BadSupport, NotInvertible, OrderDetectionFailed

_FD_STEP = {0: 0.0, 1: 1e-5, 2: 1e-4}


def _bisect_quantile(cdf, u, lo, hi, iters=64):
    """Vectorized bisection for a continuous increasing cdf."""
    u = np.asarray(u, dtype=float)
    a = np.full(u.shape, lo, dtype=float)
    b = np.full(u.shape, hi, dtype=float)
    for _ in range(iters):
        mid = 0.5 * (a + b)
        below = cdf(mid) < u
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)
    return 0.5 * (a + b)


def _newton_quantile(cdf, pdf, u, lo, hi, bisect_steps=8, max_newton=60):
    """Bisection to a short bracket, then Newton steps kept inside it.

    Only entries that have not converged are carried through each step.
    """
    u = np.asarray(u, dtype=float)
    a = np.full(u.shape, lo, dtype=float)
    b = np.full(u.shape, hi, dtype=float)
    for _ in range(bisect_steps):
        mid = 0.5 * (a + b)
        below = cdf(mid) < u
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)
    x = 0.5 * (a + b)
    act = np.arange(u.size)
    xf, af, bf, uf = x.ravel(), a.ravel(), b.ravel(), u.ravel()
    for _ in range(max_newton):
        if act.size == 0:
            break
        xa, aa, ba, ua = xf[act], af[act], bf[act], uf[act]
        fx = cdf(xa) - ua
        aa = np.where(fx < 0, xa, aa)
        ba = np.where(fx < 0, ba, xa)
        d = pdf(xa)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(d > 0, xa - fx / d, 0.5 * (aa + ba))
        xn = np.where((step >= aa) & (step <= ba), step, 0.5 * (aa + ba))
        xf[act], af[act], bf[act] = xn, aa, ba
        done = (np.abs(fx) <= 2e-16) | (xn == xa)
        act = act[~done]
    return xf.reshape(u.shape)


class DistributionModel:
    """Base class.  Subclasses set ``name`` and ``support`` and override the
    analytic pieces."""

    name = "model"
    support: tuple[float, float] = (0.0, 1.0)
    # points where the pdf itself is unbounded
    unbounded_points: tuple = ()

    def pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, u):
        a, b = self.support
        return _bisect_quantile(self.cdf, u, a, b)

    def sample(self, rng: np.random.Generator, size):
        return self.quantile(rng.random(size))

    def _derivative(self, k: int, x: float, side: str):
        """Analytic one-sided derivative, or None when not available."""
        return None

    def derivative(self, k: int, x: float, side: str = "right") -> float:
        if side not in ("left", "right"):
            raise BadParameter("side must be 'left' or 'right'")
        if k < 0:
            raise BadParameter("derivative order must be nonnegative")
        if k == 0 and x in self.unbounded_points:
            return math.inf
        v = self._derivative(k, float(x), side)
        if v is not None:
            return float(v)
        if k > 2:
            raise OrderDetectionFailed(
                f"{self.name}: no analytic derivative of order {k}")
        return self._fd_derivative(k, float(x), side)

    def _fd_derivative(self, k, x, side):
        # one-sided differences of the pdf, tolerance about 1e-4
        h = _FD_STEP[k] or 1e-9
        s = 1.0 if side == "right" else -1.0
        pts = x + s * h * np.arange(1, 4, dtype=float)
        f = np.asarray(self.pdf(pts), dtype=float)
        if k == 0:
            return float(2 * f[0] - f[1])
        if k == 1:
            return float(s * (f[1] - f[0]) / h)
        return float((f[2] - 2 * f[1] + f[0]) / h ** 2)

    def is_bounded(self, k: int = 0) -> bool:
        return not self.unbounded_points

    @property
    def strictly_increasing(self) -> bool:
        return True

    def __repr__(self):
        return f"<{self.name} on {self.support}>"


class UniformModel(DistributionModel):
    def __init__(self, a: float = 0.0, b: float = 1.0):
        if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
            raise BadSupport(f"uniform needs a < b, got ({a}, {b})")
        self.support = (float(a), float(b))
        self.name = "uniform" if (a, b) == (0.0, 1.0) else f"uniform({a},{b})"

    def pdf(self, x):
        a, b = self.support
        x = np.asarray(x, dtype=float)
        return np.where((x > a) & (x < b), 1.0 / (b - a), 0.0)

    def cdf(self, x):
        a, b = self.support
        return np.clip((np.asarray(x, dtype=float) - a) / (b - a), 0.0, 1.0)

    def quantile(self, u):
        a, b = self.support
        return a + (b - a) * np.asarray(u, dtype=float)

    def _derivative(self, k, x, side):
        a, b = self.support
        return 1.0 / (b - a) if k == 0 else 0.0


class LinearBModel(DistributionModel):
    """f(x) = x + 1/2 on (0, 1)."""
    name = "linear-b"

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x > 0) & (x < 1), x + 0.5, 0.0)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        return 0.5 * x * x + 0.5 * x

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        return 4.0 * u / (1.0 + np.sqrt(1.0 + 8.0 * u))

    def _derivative(self, k, x, side):
        return x + 0.5 if k == 0 else (1.0 if k == 1 else 0.0)


class AbsSineCModel(DistributionModel):
    """f(x) = (pi/2) |sin(2 pi x)| on (0, 1)."""
    name = "abs-sine-c"

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x > 0) & (x < 1), 0.5 * np.pi * np.abs(np.sin(2 * np.pi * x)), 0.0)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        cos = np.cos(2 * np.pi * x)
        return np.where(x <= 0.5, 0.25 * (1 - cos), 0.5 + 0.25 * (1 + cos))

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        lo = np.arccos(np.clip(1 - 4 * u, -1, 1)) / (2 * np.pi)
        hi = 1 - np.arccos(np.clip(4 * u - 3, -1, 1)) / (2 * np.pi)
        return np.where(u <= 0.5, lo, hi)

    def _derivative(self, k, x, side):
        # piece 0 on (0, 1/2], piece 1 on (1/2, 1)
        if side == "right":
            sign = 1.0 if x < 0.5 else -1.0
        else:
            sign = 1.0 if x <= 0.5 else -1.0
        w = 2 * np.pi
        return sign * 0.5 * np.pi * w ** k * math.sin(w * x + k * math.pi / 2)


class SineDModel(DistributionModel):
    """Half sine hump of mass 1/2 on (0, M], M = (r-1)/r, followed by g on (M, 1).

    g must start at zero with slope matching the hump's slope at 0 so that
    the first nonvanishing derivative at both critical points is the first
    one.  Two shapes are available:

    ``exp``  g(t) = D t exp(-lam t), lam fitted for mass 1/2
    ``poly`` g(t) = D t (1 - t/s)^2 on t < s, s = sqrt(6/D)  (needs r <~ 1.64)
    with t = x - M and D = (pi r)^2 / (4 (r-1)^2).
    """

    def __init__(self, r: float, g: str = "exp"):
        if not 1.0 < r < 2.0:
            raise BadParameter(f"sine-d needs r in (1, 2), got {r}")
        self.r = float(r)
        self.M = (r - 1.0) / r
        self.A = math.pi * r / (4.0 * (r - 1.0))          # hump amplitude
        self.w = math.pi * r / (r - 1.0)                   # hump frequency
        self.D = self.A * self.w
        self.g = g
        self.reference = (0.0, 1.0)
        width = 1.0 - self.M
        if g == "exp":
            mass = lambda lam: self._exp_mass(lam, width) - 0.5
            if mass(1e-12) < 0:
                raise BadParameter("sine-d: exp tail cannot reach mass 1/2")
            self.lam = optimize.brentq(mass, 1e-12, 1e4, xtol=1e-15, rtol=1e-15)
        elif g == "poly":
            self.s = math.sqrt(6.0 / self.D)
            if self.s > width:
                raise BadParameter(f"sine-d poly tail needs r <= ~1.64, got {r}")
            self.support = (0.0, self.M + self.s)
        else:
            raise BadParameter(f"unknown g shape {g!r}")
        self.name = f"sine-d({self.r:g},{g})"

    def _exp_mass(self, lam, t):
        x = lam * t
        if x < 1e-3:
            # 1 - e^-x (1 + x) loses everything to cancellation for small x
            h = x * x * (0.5 - x / 3.0 + x * x / 8.0 - x ** 3 / 30.0)
        else:
            h = 1.0 - math.exp(-x) * (1.0 + x)
        return self.D * h / lam ** 2

    def _g(self, t):
        if self.g == "exp":
            return self.D * t * np.exp(-self.lam * t)
        return np.where(t < self.s, self.D * t * (1 - t / self.s) ** 2, 0.0)

    def _G(self, t):
        t = np.asarray(t, dtype=float)
        if self.g == "exp":
            lam = self.lam
            return self.D * (1.0 - np.exp(-lam * t) * (1.0 + lam * t)) / lam ** 2
        s = self.s
        tt = np.minimum(t, s)
        return self.D * (tt ** 2 / 2 - 2 * tt ** 3 / (3 * s) + tt ** 4 / (4 * s * s))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        hump = self.A * np.sin(self.w * np.clip(x, 0, self.M))
        tail = self._g(np.clip(x - self.M, 0, None))
        out = np.where(x <= self.M, hump, tail)
        return np.where((x > 0) & (x < 1), out, 0.0)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        hump = 0.25 * (1 - np.cos(self.w * np.minimum(x, self.M)))
        tail = 0.5 + self._G(np.maximum(x - self.M, 0.0))
        return np.where(x <= self.M, hump, tail)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        out = np.arccos(np.clip(1 - 4 * np.minimum(u, 0.5), -1, 1)) / self.w
        tail = u > 0.5
        if np.any(tail):
            width = self.support[1] - self.M
            t = _newton_quantile(self._G, self._g, u[tail] - 0.5, 0.0, width,
                                 )
            out = np.array(out, dtype=float)
            out[tail] = self.M + t
        return out

    def _derivative(self, k, x, side):
        on_hump = x < self.M or (x == self.M and side == "left")
        if on_hump:
            return self.A * self.w ** k * math.sin(self.w * x + k * math.pi / 2)
        t = x - self.M
        if self.g == "exp":
            m = -self.lam
            return self.D * math.exp(m * t) * (m ** k * t + k * m ** (k - 1) if k else t)
        if t >= self.s:
            return 0.0
        coef = self.D * np.array([0.0, 1.0, -2.0 / self.s, 1.0 / self.s ** 2])
        return float(P.polyval(t, P.polyder(coef, k) if k else coef))


class BetaModel(DistributionModel):
    def __init__(self, a: float, b: float):
        if a < 1 or b < 1:
            raise BadParameter("beta model requires both shape parameters >= 1")
        self.a, self.b = float(a), float(b)
        self._logB = special.betaln(self.a, self.b)
        self.name = f"beta({self.a:g},{self.b:g})"

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > 0) & (x < 1)
        z = np.where(inside, x, 0.5)
        v = np.exp(special.xlogy(self.a - 1, z) + special.xlog1py(self.b - 1, -z) - self._logB)
        return np.where(inside, v, 0.0)

    def cdf(self, x):
        return special.betainc(self.a, self.b, np.clip(np.asarray(x, dtype=float), 0.0, 1.0))

    def quantile(self, u):
        return special.betaincinv(self.a, self.b, np.asarray(u, dtype=float))

    def _derivative(self, k, x, side):
        # Leibniz rule on x^(a-1) (1-x)^(b-1)
        def term(p, j, z):
            ff = 1.0
            for i in range(j):
                ff *= p - i
            if ff == 0.0:
                return 0.0
            e = p - j
            if z == 0.0:
                return ff if e == 0 else (0.0 if e > 0 else math.copysign(math.inf, ff))
            return ff * z ** e

        total = 0.0
        for j in range(k + 1):
            u = term(self.a - 1, j, x)
            v = term(self.b - 1, k - j, 1.0 - x) * (-1) ** (k - j)
            if u == 0.0 or v == 0.0:
                continue
            total += math.comb(k, j) * u * v
        return total / math.exp(self._logB)


class ArcsineModel(DistributionModel):
    """f(x) = 1 / (pi sqrt(x (1-x))), unbounded at both ends."""
    name = "arcsine-f"
    unbounded_points = (0.0, 1.0)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = 1.0 / (np.pi * np.sqrt(x * (1 - x)))
        return np.where((x > 0) & (x < 1), v, 0.0)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        return 2.0 / np.pi * np.arcsin(np.sqrt(x))

    def quantile(self, u):
        return np.sin(0.5 * np.pi * np.asarray(u, dtype=float)) ** 2

    def _derivative(self, k, x, side):
        if x in (0.0, 1.0):
            return math.inf if k == 0 else math.copysign(math.inf, 0.5 - x)
        f = 1.0 / (math.pi * math.sqrt(x * (1 - x)))
        if k == 0:
            return f
        if k == 1:
            return f * (2 * x - 1) / (2 * x * (1 - x))
        return None

    def is_bounded(self, k=0):
        return False


@dataclass
class PiecewisePolynomialPdf(DistributionModel):
    """pdf given by one power-series polynomial (in x) per piece."""
    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        if bp.ndim != 1 or len(bp) < 2 or np.any(np.diff(bp) <= 0):
            raise BadSupport("breakpoints must be strictly increasing")
        if len(self.pieces) != len(bp) - 1:
            raise BadSupport("need one coefficient list per piece")
        self.breakpoints = tuple(bp)
        self.pieces = tuple(tuple(float(c) for c in pc) for pc in self.pieces)
        self.support = (bp[0], bp[-1])
        self.name = "piecewise-polynomial"
        self._anti = [P.polyint(pc) for pc in self.pieces]
        masses = [P.polyval(b, F) - P.polyval(a, F)
                  for a, b, F in zip(bp[:-1], bp[1:], self._anti)]
        total = float(sum(masses))
        if abs(total - 1.0) > 1e-9:
            raise BadSupport(f"pdf mass is {total!r}, not 1")
        for a, b, pc in zip(bp[:-1], bp[1:], self.pieces):
            grid = np.linspace(a, b, 257)
            if np.any(P.polyval(grid, pc) < -1e-12):
                raise BadSupport("pdf is negative somewhere")
        self._cum = np.concatenate([[0.0], np.cumsum(masses)])

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(tuple(obj["breakpoints"]), tuple(tuple(p) for p in obj["pieces"]))

    def to_json(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "pieces": [list(p) for p in self.pieces]}

    def _piece_index(self, x):
        bp = np.asarray(self.breakpoints)
        return np.clip(np.searchsorted(bp, x, side="right") - 1, 0, len(self.pieces) - 1)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        idx = self._piece_index(x)
        out = np.zeros(x.shape)
        for j, pc in enumerate(self.pieces):
            sel = idx == j
            out = np.where(sel, P.polyval(x, pc), out)
        a, b = self.support
        return np.where((x > a) & (x < b), out, 0.0)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), *self.support)
        idx = self._piece_index(x)
        bp = np.asarray(self.breakpoints)
        out = np.zeros(x.shape)
        for j, F in enumerate(self._anti):
            val = self._cum[j] + P.polyval(x, F) - P.polyval(bp[j], F)
            out = np.where(idx == j, val, out)
        return np.clip(out, 0.0, 1.0)

    def _derivative(self, k, x, side):
        bp = self.breakpoints
        j = int(np.searchsorted(bp, x, side="right" if side == "right" else "left")) - 1
        j = min(max(j, 0), len(self.pieces) - 1)
        pc = self.pieces[j]
        return float(P.polyval(x, P.polyder(pc, k) if k else pc))

    def __hash__(self):
        return hash((self.breakpoints, self.pieces))


class ConditionalModel(DistributionModel):
    """Base model restricted to (lo, hi) and renormalized."""

    def __init__(self, base: DistributionModel, lo: float, hi: float):
        self.base = base
        self.support = (float(lo), float(hi))
        self.F0 = float(base.cdf(lo))
        self.mass = float(base.cdf(hi)) - self.F0
        if self.mass <= 0:
            raise BadSupport("conditioning cell has zero mass")
        self.name = f"{base.name}|({lo:g},{hi:g})"

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.support
        return np.where((x > a) & (x < b), self.base.pdf(x) / self.mass, 0.0)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), *self.support)
        return np.clip((self.base.cdf(x) - self.F0) / self.mass, 0.0, 1.0)

    def quantile(self, u):
        return self.base.quantile(self.F0 + self.mass * np.asarray(u, dtype=float))


def uniform_model(a: float = 0.0, b: float = 1.0) -> UniformModel:
    return UniformModel(a, b)


NAMED = ("uniform", "linear-b", "abs-sine-c", "sine-d", "beta", "arcsine-f")


def named_example_model(name: str, *args, **kw) -> DistributionModel:
    """Build one of the example models; arguments may be embedded in the name,
    e.g. ``"beta(2,3)"`` or ``"sine-d(1.5,poly)"``."""
    m = re.fullmatch(r"\s*([a-z-]+)\s*(?:\((.*)\))?\s*", name)
    if not m:
        raise BadParameter(f"cannot parse model name {name!r}")
    key, inner = m.group(1), m.group(2)
    if inner:
        parsed = []
        for tok in inner.split(","):
            tok = tok.strip()
            try:
                parsed.append(float(tok))
            except ValueError:
                parsed.append(tok)
        args = tuple(parsed) + tuple(args)
    if key == "uniform":
        return UniformModel(*args, **kw)
    if key == "linear-b":
        return LinearBModel()
    if key == "abs-sine-c":
        return AbsSineCModel()
    if key == "sine-d":
        return SineDModel(*args, **kw)
    if key == "beta":
        if not args and not kw:
            args = (2.0, 3.0)
        return BetaModel(*args, **kw)
    if key in ("arcsine-f", "arcsine"):
        return ArcsineModel()
    raise BadParameter(f"unknown model {name!r}; choose from {NAMED}")


def load_model(source) -> DistributionModel:
    """Model from a JSON object, a JSON file path or a name string."""
    if isinstance(source, DistributionModel):
        return source
    if isinstance(source, str):
        s = source.strip()
        if s.startswith("{"):
            return load_model(json.loads(s))
        if s.endswith(".json"):
            with open(s) as fh:
                return load_model(json.load(fh))
        return named_example_model(s)
    if isinstance(source, dict):
        if "breakpoints" in source:
            return PiecewisePolynomialPdf.from_json(source)
        return named_example_model(source["name"], *source.get("params", ()))
    raise BadParameter(f"cannot build a model from {source!r}")


def transformed_proximity_map_check(model: DistributionModel, x: float,
                                    params: PcdParams) -> ProximityRegion:
    """N_F(x) = F^-1(N(F(x))) where N acts on the unit interval."""
    if not model.strictly_increasing:
        raise NotInvertible(f"{model.name} has a non-invertible cdf")
    a, b = model.support
    if not a < x < b:
        raise BadParameter(f"{x} is outside the support of {model.name}")
    u = float(model.cdf(x))
    reg = proximity_region(u, (0.0, 1.0), params.c, params)
    lo = a if reg.lo <= 0 else float(model.quantile(reg.lo))
    hi = b if reg.hi >= 1 else float(model.quantile(reg.hi))
    return ProximityRegion(lo, hi, reg.kind)
