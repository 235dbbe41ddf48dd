"""Time the compiled kernels against the pure-Python reference.

    python3 benchmarks/bench_kernels.py [--repeat N]

Inputs are Heyting algebras on chains and Boolean lattices of growing size.
Each kernel is checked for equal output before it is timed.
"""
import argparse
import itertools
import timeit

import numpy as np

from impcomp import kernels
from impcomp.order import Lattice, derive_heyting


def boolean(k):
    names = ["".join(map(str, bits)) for bits in itertools.product((0, 1), repeat=k)]
    order = [(a, b) for a in names for b in names if a != b and all(x <= y for x, y in zip(a, b))]
    return Lattice(names, order)


def chain(n):
    names = [f"c{i}" for i in range(n)]
    return Lattice(names, list(zip(names, names[1:])))


def cases(H):
    L = H.lattice
    n, imp, meet, top = L.n, np.asarray(H.imp), L.meet_table, L.top
    submeet = kernels.pure.subset_folds(meet, top, n)
    subjoin = kernels.pure.subset_folds(L.join_table, L.bottom, n)
    return {
        "app_table": lambda k: k.app_table(L.leq, imp, meet, top),
        "encoded_meet_table": lambda k: k.encoded_meet_table(imp, meet, top),
        "meet_distribution_violations": lambda k: k.meet_distribution_violations(imp, meet, submeet, n),
        "joins_violations": lambda k: k.joins_violations(imp, meet, subjoin, n, top),
        "exists_all": lambda k: k.exists_all(imp, meet, top, n),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled is None:
        print("compiled kernels are not built; only the Python backend is available")
        return
    print(f"{'lattice':<10} {'kernel':<30} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for label, L in (("chain8", chain(8)), ("bool3", boolean(3)), ("chain12", chain(12)), ("bool4", boolean(4))):
        H = derive_heyting(L)
        for name, run in cases(H).items():
            a, b = run(kernels.pure), run(kernels.compiled)
            assert np.array_equal(a, b), f"{name} disagrees on {label}"
            tp = min(timeit.repeat(lambda: run(kernels.pure), number=1, repeat=args.repeat)) * 1e3
            tc = min(timeit.repeat(lambda: run(kernels.compiled), number=1, repeat=args.repeat)) * 1e3
            print(f"{label:<10} {name:<30} {tp:>10.2f} {tc:>10.2f} {tp / max(tc, 1e-6):>8.1f}x")


if __name__ == "__main__":
    main()
