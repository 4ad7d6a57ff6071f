#!/usr/bin/env python3
"""Time the neighbor-counting kernels: numba against the pure-numpy fallback.

The package picks the numba path automatically and falls back to numpy when
BLOCKORDER_DISABLE_NUMBA=1 is set (or numba is missing); both produce
bit-identical results, so this benchmark is purely about speed.  The first
numba call compiles, so it is timed separately.
"""

import time

import numpy as np

from blockorder._kernels import (
    HAS_NUMBA,
    count_within_numba,
    count_within_numpy,
    kth_neighbor_distance_numba,
    kth_neighbor_distance_numpy,
)
from blockorder.mi import default_k

CASES = [(1000, 2), (1000, 6), (4000, 4), (10000, 2)]
REPEATS = 3


def timed(fn, *args):
    best = float("inf")
    for _ in range(REPEATS):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    print(f"numba available: {HAS_NUMBA}")
    print(f"{'case':>14} {'kernel':>12} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for n, d in CASES:
        rng = np.random.default_rng(0)
        pts = rng.standard_normal((n, d))
        k = default_k(n)
        radii = kth_neighbor_distance_numpy(pts, k)

        t_np, eps_np = timed(kth_neighbor_distance_numpy, pts, k)
        if HAS_NUMBA:
            kth_neighbor_distance_numba(pts[:64], min(k, 32))  # compile outside timing
            t_nb, eps_nb = timed(kth_neighbor_distance_numba, pts, k)
            assert np.array_equal(eps_np, eps_nb)
            print(f"{f'n={n} d={d}':>14} {'kth-dist':>12} {t_np:>9.3f}s {t_nb:>9.3f}s {t_np / t_nb:>7.1f}x")
        else:
            print(f"{f'n={n} d={d}':>14} {'kth-dist':>12} {t_np:>9.3f}s {'-':>10} {'-':>8}")

        t_np, counts_np = timed(count_within_numpy, pts, radii)
        if HAS_NUMBA:
            count_within_numba(pts[:64], radii[:64])
            t_nb, counts_nb = timed(count_within_numba, pts, radii)
            assert np.array_equal(counts_np, counts_nb)
            print(f"{'':>14} {'count':>12} {t_np:>9.3f}s {t_nb:>9.3f}s {t_np / t_nb:>7.1f}x")
        else:
            print(f"{'':>14} {'count':>12} {t_np:>9.3f}s {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
