"""Benchmark the numba kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Covers the two hot paths: the incomplete-beta continued fraction behind
every p-value/quantile, and batch quadratic-surface evaluation behind the
optimizer's grid stage.
"""

import argparse
import time

import numpy as np

from edmlab.kernels import _numpy

try:
    from edmlab.kernels import _numba
except ImportError:
    _numba = None


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_betainc(impl, xs):
    def run():
        acc = 0.0
        for x in xs:
            acc += impl.betainc(3.5, 7.25, x)
        return acc

    return run


def bench_poly2(impl, pts, lin, quad):
    def run():
        return impl.poly2_eval(1.0, lin, quad, pts)

    return run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    xs = rng.uniform(0.001, 0.999, size=20_000)
    n = 6
    lin = rng.normal(size=n)
    quad = rng.normal(size=(n, n))
    quad = (quad + quad.T) / 2
    pts = np.ascontiguousarray(rng.uniform(-1, 1, size=(200_000, n)))

    cases = [
        ("betainc x20k", bench_betainc(_numpy, xs), bench_betainc(_numba, xs) if _numba else None),
        ("poly2_eval 200k x 6", bench_poly2(_numpy, pts, lin, quad),
         bench_poly2(_numba, pts, lin, quad) if _numba else None),
    ]

    print(f"{'kernel':<22} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for name, np_fn, nb_fn in cases:
        t_np = timeit(np_fn, args.repeats)
        if nb_fn is None:
            print(f"{name:<22} {t_np * 1e3:>10.2f}ms {'n/a':>12} {'n/a':>9}")
            continue
        nb_fn()  # JIT warmup outside the timed region
        t_nb = timeit(nb_fn, args.repeats)
        print(f"{name:<22} {t_np * 1e3:>10.2f}ms {t_nb * 1e3:>10.2f}ms {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
