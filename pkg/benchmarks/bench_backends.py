#!/usr/bin/env python3
"""Timing comparison: compiled kernels vs the NumPy fallback.

Run after installing the package:

    python benchmarks/bench_backends.py
"""

import time

import numpy as np

from jonq import _kernels_py
from jonq.algebra import GOLDEN_FREQ, default_alpha

try:
    from jonq import _kernels
except ImportError:
    _kernels = None

ALPHA = default_alpha()
BETA = np.exp(2j * np.pi * GOLDEN_FREQ)


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_cocycle(mod, kind, rho, n, samples):
    thetas = np.mod(0.123 + np.arange(samples) * GOLDEN_FREQ, 1.0)
    return timeit(
        lambda: mod.cocycle_sums(kind, ALPHA, rho, GOLDEN_FREQ, 0.0, None, None, thetas, n)
    )


def bench_orbit(mod, map_code, n):
    return timeit(
        lambda: mod.orbit_points(map_code, ALPHA, BETA, 1e-3 + 0j, 1.0 + 0j, 1e-3 + 0j, n)
    )


def main():
    cases = [
        ("cocycle products (squared family, rho=4, n=2e4, M=64)",
         lambda m: bench_cocycle(m, m.KIND_JONQ_B, 4.0, 20_000, 64)),
        ("cocycle products (normalized family, rho=2, n=2e4, M=64)",
         lambda m: bench_cocycle(m, m.KIND_BTILDE, 2.0, 20_000, 64)),
        ("map orbit (f, n=2e5)",
         lambda m: bench_orbit(m, m.MAP_F, 200_000)),
        ("map orbit (inverted square, n=2e5)",
         lambda m: bench_orbit(m, m.MAP_G, 200_000)),
    ]
    print(f"{'case':<55} {'python':>9} {'compiled':>9} {'speedup':>8}")
    for name, runner in cases:
        t_py = runner(_kernels_py)
        if _kernels is None:
            print(f"{name:<55} {t_py:>8.3f}s {'n/a':>9} {'n/a':>8}")
            continue
        t_cy = runner(_kernels)
        print(f"{name:<55} {t_py:>8.3f}s {t_cy:>8.3f}s {t_py / t_cy:>7.1f}x")
    if _kernels is None:
        print("\ncompiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()
