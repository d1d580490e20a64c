"""Command line entry point: ``pcdom <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import math
import sys

from .core import PcdParams, build_digraph, domination_number
from .errors import PcdError

CSV_COLUMNS = {
    "exact-prob": ["n", "r", "c", "regime", "p"],
    "pmf": ["q", "probability"],
    "simulate": ["q", "count", "probability", "stderr"],
    "verify": ["model", "n", "r", "c", "exact", "numeric", "mc", "stderr", "z", "pass"],
}


def _float(s: str) -> float:
    if s.strip().lower() in ("inf", "infinity", "+inf"):
        return math.inf
    return float(s)


def read_points(path: str) -> list[float]:
    """Plain text (one coordinate per line, '#' comments) or a JSON array."""
    with open(path) as fh:
        text = fh.read()
    s = text.strip()
    if s.startswith("["):
        return [float(v) for v in json.loads(s)]
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(float(line))
    return out


def _read_json(arg: str):
    s = arg.strip()
    if s.startswith("{") or s.startswith("["):
        return json.loads(s)
    with open(arg) as fh:
        return json.load(fh)


def _emit(out: str):
    sys.stdout.write(out if out.endswith("\n") else out + "\n")


def cmd_gamma(a) -> int:
    g = build_digraph(read_points(a.x), read_points(a.y), PcdParams(a.r, a.c))
    res = domination_number(g)
    obj = {"gamma": res.gamma,
           "per_interval": [{"interval": i, "n": k, "gamma": v} for i, k, v in res.per_interval]}
    if a.witness:
        obj["witness"] = list(res.witness_set)
    _emit(json.dumps(obj))
    return 0


def cmd_exact_prob(a) -> int:
    from .exact_uniform import p_exact_full
    from .mc import write_csv
    if a.grid:
        g = _read_json(a.grid)
        ns, rs, cs = g["n"], g["r"], g["c"]
    else:
        if a.n is None or a.r is None or a.c is None:
            raise SystemExit("exact-prob needs --n, --r and --c, or --grid")
        ns, rs, cs = [a.n], [a.r], [a.c]
    rows = []
    for n in ns:
        for r in rs:
            for c in cs:
                res = p_exact_full(int(n), PcdParams(_float(str(r)), float(c)))
                rows.append([int(n), _float(str(r)), float(c), res.regime, res.value])
    _emit(write_csv(CSV_COLUMNS["exact-prob"], rows))
    return 0


def cmd_numeric_prob(a) -> int:
    from .dists import load_model
    from .general_f import p_numeric_general
    from .mc import fmt
    model = load_model(a.model)
    _emit(fmt(p_numeric_general(model, PcdParams(a.r, a.c), a.n)))
    return 0


def cmd_asymptotic(a) -> int:
    from .asymptotic import (asymptotic_cccd, asymptotic_general_left,
                             asymptotic_general_right, asymptotic_uniform)
    from .dists import load_model
    if a.side == "uniform":
        if a.c is None:
            raise SystemExit("--side uniform needs --c")
        res = asymptotic_uniform(PcdParams(a.r, a.c))
    else:
        model = load_model(a.model)
        if a.side == "cccd":
            res = asymptotic_cccd(model)
        elif a.side == "right":
            res = asymptotic_general_right(model, a.r)
        else:
            res = asymptotic_general_left(model, a.r)
    _emit(json.dumps(res.as_dict()))
    return 0


def cmd_pmf(a) -> int:
    from .dists import UniformModel, load_model
    from .mc import write_csv
    from .multi import asymptotic_multi, pmf_general_multi, pmf_uniform_multi
    params = PcdParams(a.r, a.c)
    if a.limit:
        model = load_model(a.model) if a.model else None
        law = asymptotic_multi(a.m, params, model)
        d = law.as_dict()
        d["pmf"] = {str(k): v for k, v in law.pmf().items()}
        _emit(json.dumps(d))
        return 0
    if a.model is None and a.y_model is None:
        pmf = pmf_uniform_multi(a.n, a.m, params, cap=a.cap,
                                method="enumerate" if a.n + a.m <= a.cap else "dp")
    else:
        xm = load_model(a.model) if a.model else UniformModel()
        if a.y_points:
            ym = read_points(a.y_points)
            m = None
        else:
            ym = load_model(a.y_model) if a.y_model else UniformModel()
            m = a.m
        pmf = pmf_general_multi(xm, ym, a.n, m, params, nodes=a.nodes)
    _emit(write_csv(CSV_COLUMNS["pmf"], zip(pmf.support, pmf.probabilities)))
    return 0


def cmd_simulate(a) -> int:
    from .mc import McConfig, mc_gamma_pmf, write_csv
    cfg = McConfig.from_dict(_read_json(a.config))
    pmf = mc_gamma_pmf(cfg)
    rows = [(q, pmf.extra["counts"][q], p, pmf.extra["stderr"][q])
            for q, p in zip(pmf.support, pmf.probabilities)]
    _emit(write_csv(CSV_COLUMNS["simulate"], rows))
    return 0


def cmd_verify(a) -> int:
    from .mc import verify_grid
    rep = verify_grid(_read_json(a.grid) if a.grid else None)
    _emit(rep.to_csv())
    print(f"# max |z| = {rep.max_abs_z:.3f}, failures = {rep.failures}", file=sys.stderr)
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcdom",
                                description="Domination number of proximity catch digraphs")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("gamma", help="domination number of a data set")
    s.add_argument("--x", required=True, help="file with the data points")
    s.add_argument("--y", required=True, help="file with the reference points")
    s.add_argument("--r", type=_float, required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--witness", action="store_true", help="include a minimum dominating set")
    s.set_defaults(fn=cmd_gamma)

    s = sub.add_parser("exact-prob", help="closed-form P(gamma=2), uniform data")
    s.add_argument("--n", type=int)
    s.add_argument("--r", type=_float)
    s.add_argument("--c", type=float)
    s.add_argument("--grid", help="JSON file or string with lists n, r, c")
    s.set_defaults(fn=cmd_exact_prob)

    s = sub.add_parser("numeric-prob", help="P(gamma=2) by quadrature for a model")
    s.add_argument("--model", required=True, help="model name, JSON string or JSON file")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=_float, required=True)
    s.add_argument("--c", type=float, required=True)
    s.set_defaults(fn=cmd_numeric_prob)

    s = sub.add_parser("asymptotic", help="large-n limit of P(gamma=2)")
    s.add_argument("--model", default="uniform")
    s.add_argument("--r", type=_float, required=True)
    s.add_argument("--side", choices=["left", "right", "cccd", "uniform"], default="left")
    s.add_argument("--c", type=float)
    s.set_defaults(fn=cmd_asymptotic)

    s = sub.add_parser("pmf", help="pmf of gamma with m reference points")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=_float, required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--model", help="X model (default uniform)")
    s.add_argument("--y-model", help="Y model (default uniform)")
    s.add_argument("--y-points", help="file with fixed reference points")
    s.add_argument("--nodes", type=int, default=12)
    s.add_argument("--cap", type=int, default=24)
    s.add_argument("--limit", action="store_true", help="print the n -> infinity law as JSON")
    s.set_defaults(fn=cmd_pmf)

    s = sub.add_parser("simulate", help="Monte Carlo histogram of gamma")
    s.add_argument("--config", required=True, help="JSON config file or string")
    s.set_defaults(fn=cmd_simulate)

    s = sub.add_parser("verify", help="exact vs quadrature vs Monte Carlo report")
    s.add_argument("--grid", help="JSON grid file or string")
    s.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except PcdError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
