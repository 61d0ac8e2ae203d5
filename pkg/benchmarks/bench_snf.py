"""Compare the compiled and pure-Python Smith-form kernels over Z/p^c.

Usage: python3 benchmarks/bench_snf.py [--sizes 8 16 32] [--repeat 5] [--seed 0]
"""

from __future__ import annotations

import argparse
import random
import statistics
import timeit

from strata_lab import _snf_py

try:
    from strata_lab import _snf as _snf_c
except ImportError:
    _snf_c = None


def random_matrix(rng, rows, cols, p, c):
    """Entries biased towards high p-adic valuation, as lattice bases tend to be."""
    M = p**c
    return [[rng.randrange(M) * p ** rng.choice((0, 0, 1, 2)) % M for _ in range(cols)]
            for _ in range(rows)]


def bench(kernel, mats, p, c, repeat):
    def go():
        for a in mats:
            kernel.smith_mod(a, p, c, True, True, True)
    return statistics.median(timeit.repeat(go, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 48])
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 7])
    ap.add_argument("--exponent", type=int, default=12)
    ap.add_argument("--count", type=int, default=10, help="matrices per size")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    if _snf_c is None:
        print("compiled kernel not built; timing the Python kernel only")
    print(f"{'p':>3} {'size':>5} {'python (s)':>12} {'cython (s)':>12} {'speedup':>8}  agree")
    for p in args.primes:
        c = args.exponent
        for n in args.sizes:
            mats = [random_matrix(rng, n, n, p, c) for _ in range(args.count)]
            t_py = bench(_snf_py, mats, p, c, args.repeat)
            if _snf_c is None:
                print(f"{p:>3} {n:>5} {t_py:>12.4f} {'-':>12} {'-':>8}  -")
                continue
            t_c = bench(_snf_c, mats, p, c, args.repeat)
            agree = all(_snf_py.smith_mod(a, p, c)[0] == _snf_c.smith_mod(a, p, c)[0] for a in mats)
            print(f"{p:>3} {n:>5} {t_py:>12.4f} {t_c:>12.4f} {t_py / t_c:>7.1f}x  {agree}")


if __name__ == "__main__":
    main()
