#!/usr/bin/env python3
"""Time the compiled kernels against the numpy fallback.

Runs the three hot paths (labeled nearest-pair sweep, real linear-form
search, complex linear-form search) on sized workloads, checks both
backends return identical results, and prints a speedup table.

    python3 benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from layeralign._kernels import _pykernels

try:
    from layeralign._kernels import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, args, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases():
    rng = np.random.default_rng(0)

    for n_pts, dim in ((5_000, 2), (20_000, 2), (20_000, 4)):
        pts = rng.standard_normal((n_pts, dim))
        labels = rng.integers(0, 25, n_pts)
        # the sweep kernels take points pre-sorted on column 0
        order = np.lexsort(pts.T[::-1])
        pts = np.ascontiguousarray(pts[order])
        labels = np.ascontiguousarray(labels[order])
        yield f"labeled_min_sq_dist {n_pts}x{dim}", "labeled_min_sq_dist", (pts, labels)

    for m, n, N in ((2, 2, 150), (3, 2, 20), (3, 2, 35)):
        X = rng.random((m, n)) - 0.5
        rows = (2 * N + 1) ** m
        yield (f"linforms_min_real ({m},{n}) N={N} [{rows} rows]",
               "linforms_min_real", (X, N, True))

    for m, n, N in ((2, 1, 8), (2, 1, 12)):
        X = (rng.random((m, n)) - 0.5) + 1j * (rng.random((m, n)) - 0.5)
        disc = _pykernels.gaussian_disc(N)
        yield (f"linforms_min_complex ({m},{n}) N={N} [{len(disc) ** m} rows]",
               "linforms_min_complex",
               (np.ascontiguousarray(X.real), np.ascontiguousarray(X.imag), disc, True))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5, help="best-of-N timing")
    args = ap.parse_args()

    if _ckernels is None:
        print("compiled extension not available; timing the numpy fallback only")

    width = 52
    print(f"{'case':<{width}} {'python':>9} {'cython':>9} {'speedup':>8}")
    for name, fn_name, fn_args in cases():
        t_py, out_py = best_of(getattr(_pykernels, fn_name), fn_args, args.repeats)
        if _ckernels is None:
            print(f"{name:<{width}} {t_py * 1e3:8.2f}ms {'-':>9} {'-':>8}")
            continue
        t_cy, out_cy = best_of(getattr(_ckernels, fn_name), fn_args, args.repeats)
        if not same(out_py, out_cy):
            raise SystemExit(f"backend mismatch on {name}: {out_py} vs {out_cy}")
        print(f"{name:<{width}} {t_py * 1e3:8.2f}ms {t_cy * 1e3:8.2f}ms "
              f"{t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
