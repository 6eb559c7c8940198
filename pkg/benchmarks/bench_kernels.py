#!/usr/bin/env python3
"""Benchmark the JIT kernels against their pure-numpy fallbacks.

Runs the spectral butterfly and the subset-scan kernel on growing inputs
and prints per-backend timings plus the speedup. The numpy path is always
available; the numba path is skipped with a notice when the import is
unavailable or disabled via FSJUNTA_NO_NUMBA.

Usage:
    python benchmarks/bench_kernels.py [--max-n 22] [--repeats 3]
"""
import argparse
import time

import numpy as np

from fsjunta._kernels import (
    HAVE_NUMBA,
    junta_errors_numba,
    junta_errors_numpy,
    wht_numba,
    wht_numpy,
)


def best_of(repeats, fn, *args):
    timings = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        timings.append(time.perf_counter() - start)
    return min(timings)


def bench_wht(max_n: int, repeats: int) -> None:
    print(f"\n{'spectral butterfly (int64, in place)':<44}")
    print(f"{'n':>4} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    rng = np.random.default_rng(0)
    for n in range(14, max_n + 1, 2):
        base = rng.integers(-1, 2, size=1 << n).astype(np.int64) * 2
        t_np = best_of(repeats, lambda: wht_numpy(base.copy()))
        if HAVE_NUMBA:
            t_nb = best_of(repeats, lambda: wht_numba(base.copy()))
            print(f"{n:>4} {t_np * 1e3:>10.2f}ms {t_nb * 1e3:>10.2f}ms "
                  f"{t_np / t_nb:>8.2f}x")
        else:
            print(f"{n:>4} {t_np * 1e3:>10.2f}ms {'-':>12} {'-':>9}")


def bench_junta_scan(repeats: int) -> None:
    print(f"\n{'subset majority-vote error kernel':<44}")
    print(f"{'n':>4} {'|T|':>4} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    rng = np.random.default_rng(1)
    for n, t in ((16, 4), (18, 5), (20, 6)):
        values = (2 * rng.integers(0, 2, size=1 << n) - 1).astype(np.int8)
        positions = np.sort(rng.choice(n, size=t, replace=False)).astype(np.int64)
        t_np = best_of(repeats, junta_errors_numpy, values, positions)
        if HAVE_NUMBA:
            t_nb = best_of(repeats, junta_errors_numba, values, positions)
            assert (junta_errors_numba(values, positions)
                    == junta_errors_numpy(values, positions))
            print(f"{n:>4} {t:>4} {t_np * 1e3:>10.2f}ms {t_nb * 1e3:>10.2f}ms "
                  f"{t_np / t_nb:>8.2f}x")
        else:
            print(f"{n:>4} {t:>4} {t_np * 1e3:>10.2f}ms {'-':>12} {'-':>9}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=22,
                        help="largest butterfly size exponent (default 22)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats, best-of (default 3)")
    args = parser.parse_args()

    if HAVE_NUMBA:
        # compile outside the timed region
        wht_numba(np.array([1, -1], dtype=np.int64))
        junta_errors_numba(np.array([1, -1], dtype=np.int8),
                           np.array([0], dtype=np.int64))
        print("numba backend active (set FSJUNTA_NO_NUMBA=1 to disable)")
    else:
        print("numba backend unavailable; timing the numpy fallback only")

    bench_wht(args.max_n, args.repeats)
    bench_junta_scan(args.repeats)


if __name__ == "__main__":
    main()
