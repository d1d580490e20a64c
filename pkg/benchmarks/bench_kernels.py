"""Compare the numba kernels with the numpy fallback.

    python benchmarks/bench_kernels.py --rows 200000 --n 10 --m 2
"""
import argparse
import time

import numpy as np

from pcdom import _kernels as K


def best_of(fn, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return min(out)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=200_000)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--r", type=float, default=1.5)
    ap.add_argument("--c", type=float, default=0.4)
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args()

    rng = np.random.default_rng(0)
    u = rng.random((a.rows, a.n))
    y = np.sort(rng.random((a.rows, a.m)), axis=1)

    # warm the jit cache before timing
    K.split_extremes(u[:10], a.c, "numba")
    K.gamma_rows(u[:10], y[:10], a.r, a.c, "numba")

    res = {}
    for kern in ("numba", "numpy"):
        t_ext = best_of(lambda: K.split_extremes(u, a.c, kern), a.repeat)
        t_rows = best_of(lambda: K.gamma_rows(u, y, a.r, a.c, kern), a.repeat)
        res[kern] = (t_ext, t_rows)

    g1 = K.gamma_rows(u, y, a.r, a.c, "numba")
    g2 = K.gamma_rows(u, y, a.r, a.c, "numpy")
    assert np.array_equal(g1, g2), "kernels disagree"

    print(f"rows={a.rows} n={a.n} m={a.m} r={a.r} c={a.c}")
    print(f"{'kernel':8s} {'extremes [s]':>14s} {'gamma rows [s]':>15s} {'rows/s':>12s}")
    for kern, (te, tr) in res.items():
        print(f"{kern:8s} {te:14.4f} {tr:15.4f} {a.rows / tr:12.3g}")
    print(f"speedup (gamma rows): {res['numpy'][1] / res['numba'][1]:.1f}x")


if __name__ == "__main__":
    main()
