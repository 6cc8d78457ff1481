"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from mbcoherence import _kernels

CASES = [
    ("h_complete_series m=4 N=100", "h_complete_series", 4, 100),
    ("h_complete_series m=200 N=1000", "h_complete_series", 200, 1000),
    ("power_sum_average m=6 N=6", "power_sum_average", 6, 6),
    ("power_sum_average m=6 N=8", "power_sum_average", 6, 8),
]


def best_time(func, args, repeat):
    timer = timeit.Timer(lambda: func(*args))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if _kernels.compiled is None:
        print("compiled extension not built; only the pure backend is timed")
    rng = np.random.default_rng(0)
    print(f"{'case':34s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>8s}")
    for label, name, m, n in CASES:
        lam = np.ascontiguousarray(rng.dirichlet(np.ones(m)))
        pure = best_time(getattr(_kernels.pure, name), (lam, n), args.repeat)
        if _kernels.compiled is None:
            print(f"{label:34s} {pure:12.3e} {'-':>12s} {'-':>8s}")
            continue
        fast = best_time(getattr(_kernels.compiled, name), (lam, n), args.repeat)
        print(f"{label:34s} {pure:12.3e} {fast:12.3e} {pure / fast:8.1f}x")


if __name__ == "__main__":
    main()
