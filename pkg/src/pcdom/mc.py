"""Seeded Monte Carlo for gamma and the verification report.

Streams: the replicates are cut into chunks whose sizes depend only on the
configuration.  Chunk j draws from ``Generator(Philox(SeedSequence(seed)
.spawn(J)[j]))``, so results do not depend on how many worker threads run
the chunks.  Uniform doubles are numpy's 53-bit convention.  Each chunk
draws the X uniforms (rows x n) first, then the Y uniforms (rows x m) when
Y is random.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .core import PcdParams
from .dists import DistributionModel, UniformModel, load_model
from .errors import BadConfig
from .multi import GammaPmf

ROW_BUDGET = 1 << 21          # doubles per chunk for the X block


def fmt(v) -> str:
    """Round-trip float formatting used in every CSV we write."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def worker_count(requested: int | None = None) -> int:
    env = os.environ.get("CDL_THREADS")
    if env:
        try:
            k = int(env)
        except ValueError:
            raise BadConfig(f"CDL_THREADS must be an integer, got {env!r}") from None
        if k < 1:
            raise BadConfig("CDL_THREADS must be positive")
        return k
    if requested:
        return int(requested)
    return max(1, min(8, os.cpu_count() or 1))


@dataclass
class McConfig:
    replicates: int
    seed: int = 0
    n: int = 10
    m: int = 2
    params: PcdParams = field(default_factory=lambda: PcdParams(2.0, 0.5))
    x_model: DistributionModel = field(default_factory=UniformModel)
    # a DistributionModel (m iid draws) or fixed reference coordinates
    y_model: object = (0.0, 1.0)
    parallel_chunks: int | None = None
    threads: int | None = None
    kernel: str | None = None

    def __post_init__(self):
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise BadConfig("replicates must be a positive integer")
        if int(self.n) != self.n or self.n < 1:
            raise BadConfig("n must be a positive integer")
        self.replicates, self.n = int(self.replicates), int(self.n)
        if not isinstance(self.y_model, DistributionModel):
            ys = tuple(sorted(float(v) for v in self.y_model))
            if len(ys) < 1:
                raise BadConfig("at least one reference point is required")
            if len(set(ys)) != len(ys):
                raise BadConfig("fixed reference points must be distinct")
            self.y_model = ys
            self.m = len(ys)
        if int(self.m) != self.m or self.m < 1:
            raise BadConfig("m must be a positive integer")
        self.m = int(self.m)
        if self.parallel_chunks is not None and self.parallel_chunks < 1:
            raise BadConfig("parallel_chunks must be positive")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise BadConfig("seed must be a 64-bit unsigned integer")

    @property
    def fixed_y(self) -> bool:
        return not isinstance(self.y_model, DistributionModel)

    def chunk_sizes(self) -> list[int]:
        R = self.replicates
        if self.parallel_chunks:
            J = min(self.parallel_chunks, R)
        else:
            rows = max(256, ROW_BUDGET // max(self.n, self.m))
            J = -(-R // rows)
        base, extra = divmod(R, J)
        return [base + (1 if j < extra else 0) for j in range(J)]

    @classmethod
    def from_dict(cls, d: dict) -> "McConfig":
        d = dict(d)
        try:
            params = PcdParams(float(d.pop("r", 2.0)), float(d.pop("c", 0.5)))
        except ValueError as e:
            raise BadConfig(str(e)) from None
        xm = d.pop("x_model", "uniform")
        ym = d.pop("y_model", d.pop("y", [0.0, 1.0]))
        x_model = load_model(xm) if not isinstance(xm, DistributionModel) else xm
        if isinstance(ym, (str, dict)):
            ym = load_model(ym)
        known = {"replicates", "seed", "n", "m", "parallel_chunks", "threads", "kernel"}
        bad = set(d) - known
        if bad:
            raise BadConfig(f"unknown config keys: {sorted(bad)}")
        if "replicates" not in d:
            raise BadConfig("config needs 'replicates'")
        return cls(params=params, x_model=x_model, y_model=ym, **d)


def _single_cell_fast_path(cfg: McConfig) -> bool:
    if not cfg.fixed_y or cfg.m != 2:
        return False
    y1, y2 = cfg.y_model
    a, b = cfg.x_model.support
    return a >= y1 and b <= y2


def _run_chunk(cfg: McConfig, ss: np.random.SeedSequence, rows: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(ss))
    n, m = cfg.n, cfg.m
    r, c = cfg.params.r, cfg.params.c
    kernel = cfg.kernel
    u = rng.random((rows, n))
    if _single_cell_fast_path(cfg):
        y1, y2 = cfg.y_model
        split = float(cfg.x_model.cdf(y1 + c * (y2 - y1)))
        mn, mx, lm, hm = _kernels.split_extremes(u, split, kernel)
        q = cfg.x_model.quantile
        fin_l = np.isfinite(lm)
        fin_h = np.isfinite(hm)
        lmx = np.full(rows, -np.inf)
        hmx = np.full(rows, np.inf)
        lmx[fin_l] = q(lm[fin_l])
        hmx[fin_h] = q(hm[fin_h])
        g = _kernels.gamma_from_extremes(np.asarray(q(mn), dtype=float),
                                         np.asarray(q(mx), dtype=float),
                                         lmx, hmx, y1, y2, r)
        return np.bincount(g, minlength=2 * m + 1)
    x = np.asarray(cfg.x_model.quantile(u), dtype=float)
    if cfg.fixed_y:
        y = np.broadcast_to(np.asarray(cfg.y_model, dtype=float), (rows, m))
    else:
        y = np.sort(np.asarray(cfg.y_model.quantile(rng.random((rows, m))), dtype=float), axis=1)
    g = _kernels.gamma_rows(x, y, r, c, kernel)
    return np.bincount(g, minlength=2 * m + 1)


def gamma_counts(cfg: McConfig) -> np.ndarray:
    """Histogram of gamma over the replicates (index = gamma value)."""
    sizes = cfg.chunk_sizes()
    seqs = np.random.SeedSequence(int(cfg.seed)).spawn(len(sizes))
    threads = worker_count(cfg.threads)
    if threads == 1 or len(sizes) == 1:
        parts = [_run_chunk(cfg, s, k) for s, k in zip(seqs, sizes)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda a: _run_chunk(cfg, *a), zip(seqs, sizes)))
    width = max(len(p) for p in parts)
    total = np.zeros(width, dtype=np.int64)
    for p in parts:
        total[:len(p)] += p
    return total


def mc_estimate_p(cfg: McConfig) -> tuple[float, float]:
    """(fraction of replicates with gamma = 2, its binomial standard error)."""
    counts = gamma_counts(cfg)
    R = cfg.replicates
    p = float(counts[2]) / R if len(counts) > 2 else 0.0
    return p, math.sqrt(p * (1.0 - p) / R)


def mc_gamma_pmf(cfg: McConfig) -> GammaPmf:
    counts = gamma_counts(cfg)
    R = cfg.replicates
    sup = [int(q) for q in np.nonzero(counts)[0]]
    probs = [float(counts[q]) / R for q in sup]
    se = {q: math.sqrt(p * (1 - p) / R) for q, p in zip(sup, probs)}
    return GammaPmf(sup, probs, cfg.n, cfg.m, cfg.params, "monte-carlo",
                    {"counts": {q: int(counts[q]) for q in sup}, "stderr": se,
                     "replicates": R})


# ------------------------------------------------------------------ verification

@dataclass
class VerificationRow:
    model: str
    n: int
    r: float
    c: float
    exact: float | None
    numeric: float
    mc: float
    stderr: float
    z: float
    passed: bool


@dataclass
class VerificationReport:
    rows: list[VerificationRow]
    z_max: float = 3.0
    numeric_tol: float = 1e-7

    @property
    def max_abs_z(self) -> float:
        zs = [abs(r.z) for r in self.rows]
        return max(zs) if zs else 0.0

    @property
    def failures(self) -> int:
        return sum(not r.passed for r in self.rows)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_csv(self) -> str:
        head = ["model", "n", "r", "c", "exact", "numeric", "mc", "stderr", "z", "pass"]
        rows = [[r.model, r.n, r.r, r.c, "" if r.exact is None else r.exact, r.numeric,
                 r.mc, r.stderr, r.z, r.passed] for r in self.rows]
        return write_csv(head, rows)


DEFAULT_GRID = {"model": "uniform", "n": [2, 3, 5, 10], "r": [1.0, 1.5, 2.0, 3.0],
                "c": [0.0, 0.3, 0.5, 0.8, 1.0], "replicates": 20000, "seed": 12345,
                "z_max": 3.0}


def verify_grid(grid: dict | None = None) -> VerificationReport:
    """Exact, quadrature and MC value at every grid point.

    z is computed against the reference value p (exact when available,
    otherwise quadrature) with standard error sqrt(p (1 - p) / R), so that a
    reference of exactly 0 or 1 demands an exact MC match.  A row passes when
    |z| <= z_max and exact and quadrature agree within numeric_tol.
    """
    from .exact_uniform import p_exact
    from .general_f import p_numeric_general

    g = dict(DEFAULT_GRID)
    g.update(grid or {})
    model = load_model(g["model"])
    R = int(g["replicates"])
    z_max = float(g.get("z_max", 3.0))
    tol = float(g.get("numeric_tol", 1e-7))
    uniform = isinstance(model, UniformModel) and model.support == (0.0, 1.0)
    rows = []
    idx = 0
    for n in g["n"]:
        for r in g["r"]:
            for c in g["c"]:
                params = PcdParams(float(r), float(c))
                exact = p_exact(int(n), params.r, params.c) if uniform else None
                numeric = p_numeric_general(model, params, int(n))
                ref = exact if exact is not None else numeric
                cfg = McConfig(R, seed=(int(g["seed"]) + idx) % 2 ** 64, n=int(n),
                               params=params, x_model=model, y_model=(0.0, 1.0),
                               threads=g.get("threads"))
                idx += 1
                p_hat, _ = mc_estimate_p(cfg)
                se = math.sqrt(max(ref * (1 - ref), 0.0) / R)
                if se > 0:
                    z = (p_hat - ref) / se
                else:
                    z = 0.0 if abs(p_hat - ref) < 1e-15 else math.inf
                ok = abs(z) <= z_max
                if exact is not None:
                    ok = ok and abs(exact - numeric) <= tol
                rows.append(VerificationRow(model.name, int(n), params.r, params.c, exact,
                                            numeric, p_hat, se, z, ok))
    return VerificationReport(rows, z_max, tol)
