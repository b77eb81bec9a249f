"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--cutoff N] [--bound B] [--repeat R]
"""
import argparse
import time

import numpy as np

from frey_sunit import _kernels
from frey_sunit.density import BLOCK, _prime_squares
from frey_sunit.qfield import make_field
from frey_sunit.sunit import _sieve_tables, sieve_moduli, slots_above, sunit_group


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(cutoff, bound):
    sq = _prime_squares(cutoff)
    yield f"squarefree residues X={cutoff:g}", lambda k: k.count_squarefree_residues(cutoff, sq, BLOCK)

    for d, primes in ((5, [2]), (17, [2]), (-7, [2, 3])):
        K = make_field(d)
        G = sunit_group(K, slots_above(K, primes))
        moduli = sieve_moduli(G)
        powtab, torstab, member = _sieve_tables(G, bound, moduli)
        qs = np.array([m[0] for m in moduli], dtype=np.int64)
        width = 2 * bound + 1
        label = f"S-unit box d={d} S={primes} B={bound} ({G.torsion_order * width ** G.rank:,} vectors)"
        yield label, (lambda k, a=(powtab, torstab, qs, member, bound, 0, width): k.sunit_box_sieve(*a))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cutoff", type=int, default=10**6)
    ap.add_argument("--bound", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    impls = _kernels.backends()
    if "cython" not in impls:
        print("compiled kernels are not built; run `python setup.py build_ext --inplace` first")
    print(f"{'case':<58} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for label, run in cases(args.cutoff, args.bound):
        tp, rp = best_of(lambda: run(impls["python"]), args.repeat)
        if "cython" in impls:
            tc, rc = best_of(lambda: run(impls["cython"]), args.repeat)
            assert np.array_equal(np.asarray(rp), np.asarray(rc)), label
            print(f"{label:<58} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")
        else:
            print(f"{label:<58} {tp:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
