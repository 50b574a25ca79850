"""Benchmark the numba kernels against the pure-numpy fallback.

Both code paths are exercised in-process by calling the private
implementations directly, so one run covers both; the public dispatch
(`SUMFREE_PURE_NUMPY`) picks between the same two functions.

Usage: python benchmarks/kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from sumfree._kernels import (
    HAS_NUMBA,
    _safe_mask_z2n_numpy,
    _sample_mask_numpy,
    mix,
    safe_mask_z2n,
    sample_mask,
)

_MASK64 = (1 << 64) - 1


def _bench(fn, repeats):
    fn()  # warm-up (numba compilation, caches)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_sample_mask(repeats):
    print("sample_mask (counter-based Bernoulli inclusion)")
    print(f"{'n':>10} {'numba':>12} {'numpy':>12} {'speedup':>8}")
    for n in (1_000, 100_000, 2_000_000):
        t_fast = _bench(lambda: sample_mask(n, 0.3, 12345, 7), repeats)
        t_np = _bench(
            lambda: _sample_mask_numpy(n, 0.3, 12345 & _MASK64, 7), repeats
        )
        a = sample_mask(n, 0.3, 12345, 7)
        b = _sample_mask_numpy(n, 0.3, 12345 & _MASK64, 7)
        assert np.array_equal(a, b), "kernel outputs diverged"
        label = f"{t_fast*1e3:10.3f}ms" if HAS_NUMBA else "       n/a"
        print(f"{n:>10} {label:>12} {t_np*1e3:10.3f}ms {t_np/t_fast:7.1f}x")


def bench_safe_mask(repeats):
    print("\nsafe_mask_z2n (safe-element census against the odd part)")
    print(f"{'2n':>10} {'|W|':>6} {'numba':>12} {'numpy':>12} {'speedup':>8}")
    rng = np.random.default_rng(0)
    for two_n in (2_000, 20_000, 100_000):
        odds = np.arange(1, two_n, 2, dtype=np.int64)
        w = odds[rng.random(odds.size) < 0.1]
        cands = np.arange(2, two_n, 2, dtype=np.int64)
        t_fast = _bench(lambda: safe_mask_z2n(two_n, w, cands), repeats)
        t_np = _bench(lambda: _safe_mask_z2n_numpy(two_n, w, cands), repeats)
        a = safe_mask_z2n(two_n, w, cands)
        b = _safe_mask_z2n_numpy(two_n, w, cands)
        assert np.array_equal(a, b), "kernel outputs diverged"
        label = f"{t_fast*1e3:10.3f}ms" if HAS_NUMBA else "       n/a"
        print(f"{two_n:>10} {w.size:>6} {label:>12} {t_np*1e3:10.3f}ms {t_np/t_fast:7.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    if not HAS_NUMBA:
        print("numba unavailable or disabled; timing the numpy fallback only")
    bench_sample_mask(args.repeats)
    bench_safe_mask(args.repeats)


if __name__ == "__main__":
    main()
