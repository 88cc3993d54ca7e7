"""Time the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""

import argparse
import random
import timeit
from fractions import Fraction

from slopecalc import IntegersMod
from slopecalc._ext import _core_py
from slopecalc.scalarext import _pair_schedule, build_extension_ring

try:
    from slopecalc._ext import _core
except ImportError:
    _core = None


def dense_terms(rng, nvars, degree, coeff):
    terms = {}
    for _ in range(60):
        e = [0] * nvars
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(nvars)] += 1
        terms[tuple(e)] = coeff(rng)
    return terms


def mul_cases():
    rng = random.Random(1)
    add, mul, is_zero = (lambda a, b: a + b), (lambda a, b: a * b), (lambda a: a == 0)
    frac = lambda r: Fraction(r.randint(-9, 9) or 1, r.randint(1, 5))  # noqa: E731
    a, b = dense_terms(rng, 5, 6, frac), dense_terms(rng, 5, 6, frac)
    yield "mul_terms Q, 60x60 terms", (a, b, add, mul, is_zero, 0)
    a, b = dense_terms(rng, 5, 6, lambda r: r.randint(1, 6)), dense_terms(rng, 5, 6, lambda r: r.randint(1, 6))
    yield "mul_terms Z/7, 60x60 terms", (a, b, None, None, None, 7)


def aut_cases():
    for n, k, times in [(3, 1, "1"), (2, 2, "0,0,0"), (3, 2, "1,2,1"), (5, 2, "0,0,0")]:
        R = build_extension_ring(IntegersMod(n), k, times)
        r, T = R.rank, R.constants
        flat = [T[a][b][g] % n for a in range(r) for b in range(r) for g in range(r)]
        order = list(range(r - 1, 0, -1))
        yield f"aut_search Z/{n} k={k} t=({times})", (n, r, flat, order, _pair_schedule(r, T, order, 0), 10**7)


def bench(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeat", type=int, default=3)
    opts = p.parse_args()
    if _core is None:
        print("compiled kernels are not built; only the fallback can be timed")
    print(f"{'case':40s} {'python (s)':>12s} {'cython (s)':>12s} {'speedup':>9s}")
    for name, cases in (("mul_terms", mul_cases()), ("aut_search", aut_cases())):
        for label, args in cases:
            slow = bench(getattr(_core_py, name), args, opts.repeat)
            if _core is None:
                print(f"{label:40s} {slow:12.4f} {'-':>12s} {'-':>9s}")
                continue
            fast = bench(getattr(_core, name), args, opts.repeat)
            print(f"{label:40s} {slow:12.4f} {fast:12.4f} {slow / fast:8.1f}x")


if __name__ == "__main__":
    main()
