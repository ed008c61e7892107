#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the three hot kernels (keyed normal draws, path pyramids, window
maxima) on both backends, verifies they agree bit for bit, and prints a
speedup table.

    python3 benchmarks/bench_backends.py [--paths 2000] [--level 10] [--repeat 5]
"""

import argparse
import time

import numpy as np

from dyadicbm._kernels import numpy_backend

try:
    from dyadicbm._kernels import _core as compiled
except ImportError:
    compiled = None


def best_of(repeat, fn, *args):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--paths", type=int, default=2000)
    ap.add_argument("--level", type=int, default=10)
    ap.add_argument("--horizon", type=int, default=4)
    ap.add_argument("--draws", type=int, default=2_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if compiled is None:
        print("compiled extension not built; nothing to compare")
        return

    rng = np.random.default_rng(0)
    seeds = rng.integers(0, 2**64, args.draws, dtype=np.uint64)
    nums = rng.integers(0, 2**50, args.draws, dtype=np.uint64)
    lvls = rng.integers(0, 30, args.draws, dtype=np.uint64)
    path_seeds = np.arange(args.paths, dtype=np.uint64)
    grid = args.horizon * 2**args.level + 1
    window_level = 2
    step = 2 ** (args.level - window_level)
    n_k = (window_level + 1) * 2**window_level + 1

    cases = [
        ("normals", f"{args.draws:.0e} draws",
         lambda b: b.normals(seeds, nums, lvls)),
        ("build_paths", f"{args.paths} paths x {grid} pts",
         lambda b: b.build_paths(path_seeds, args.horizon, args.level)),
    ]
    values = compiled.build_paths(path_seeds, args.horizon, args.level)
    cases.append(
        ("interval_abs_max", f"{args.paths} paths x {n_k} windows",
         lambda b: b.interval_abs_max(values, step, n_k))
    )

    print(f"{'kernel':<18} {'size':<24} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for name, size, fn in cases:
        t_np, out_np = best_of(args.repeat, fn, numpy_backend)
        t_cc, out_cc = best_of(args.repeat, fn, compiled)
        assert np.array_equal(
            np.asarray(out_np).view(np.uint64),
            np.asarray(out_cc).view(np.uint64),
        ), f"{name}: backends disagree"
        print(f"{name:<18} {size:<24} {t_np:>9.3f}s {t_cc:>9.3f}s "
              f"{t_np / t_cc:>7.2f}x")


if __name__ == "__main__":
    main()
