"""Time the compiled kernels against the numpy fallback.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.
"""

from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from frh import _core


def contour_case(n_points=2000, K=400):
    x = np.linspace(-40.0, -0.5, n_points)
    c = np.full(n_points, 1.2)
    h = np.full(n_points, 0.04)
    k = np.full(n_points, K, np.int64)
    return lambda mod: mod.contour_sum(0.7, 1.0, x, c, h, k)


def k33_case(beta=0.5, n_max=400):
    gr = np.exp([math.lgamma(1 + beta * n) - math.lgamma(1 + beta * (n + 1)) for n in range(n_max)])
    return lambda mod: mod.k33_scaled(gr, n_max)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    mods = _core.backends()
    if "compiled" not in mods:
        print("compiled extension not available; only the python backend is timed")
    cases = {"contour_sum 2000x400": contour_case(), "k33_scaled n=400": k33_case()}
    print(f"{'kernel':<24}" + "".join(f"{name:>14}" for name in mods) + f"{'speedup':>10}")
    for label, fn in cases.items():
        best = {}
        for name, mod in mods.items():
            fn(mod)
            best[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        line = f"{label:<24}" + "".join(f"{best[n] * 1e3:>12.2f}ms" for n in mods)
        if "compiled" in best:
            line += f"{best['python'] / best['compiled']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
