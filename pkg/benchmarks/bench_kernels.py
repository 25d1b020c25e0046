"""Benchmark the elimination kernels: compiled extension vs pure Python.

Two workloads:
  * ranks of the actual coboundary weight blocks of a truncated module
    (the inner loop of every dimension computation), and
  * ranks of random sparse rational matrices.

Run as:  python benchmarks/bench_kernels.py
"""

import random
import time
from fractions import Fraction

from ospcoho import linalg, _kernels_py
from ospcoho.algebra import adopted_table
from ospcoho.cochains import delta_matrix
from ospcoho.weightmod import TruncatedDlm

try:
    from ospcoho import _kernels_cy
except ImportError:
    _kernels_cy = None


def block_matrices(K=4):
    table = adopted_table()
    mod = TruncatedDlm(Fraction(-3, 2), Fraction(2), K)
    mats = []
    for n in range(5):
        for parity in (0, 1):
            _, _, mat = delta_matrix(mod, n, 0, parity, table)
            mats.append(mat)
    return mats


def random_matrices(count=30, size=60, density=0.08, seed=7):
    rng = random.Random(seed)
    mats = []
    for _ in range(count):
        entries = []
        for i in range(size):
            for j in range(size):
                if rng.random() < density:
                    entries.append((i, j, Fraction(rng.randint(-9, 9),
                                                   rng.randint(1, 6))))
        mats.append(linalg.SparseMatrix.from_entries(size, size, entries))
    return mats


def time_backend(impl, mats, repeats=3):
    best = None
    ranks = None
    for _ in range(repeats):
        rows_sets = [[dict(linalg._to_int_row(r)) for r in m.rows]
                     for m in mats]
        start = time.perf_counter()
        got = [len(impl.echelon(rows, False)[0]) for rows in rows_sets]
        elapsed = time.perf_counter() - start
        if best is None or elapsed < best:
            best, ranks = elapsed, got
    return best, ranks


def main():
    backends = [("python", _kernels_py)]
    if _kernels_cy is not None:
        backends.append(("cython", _kernels_cy))
    else:
        print("compiled kernel not built; benchmarking pure Python only")
    for label, mats in (("coboundary blocks (K=4, p=7/2)", block_matrices()),
                        ("random sparse 60x60", random_matrices())):
        print(f"\n== {label} ==")
        sizes = sorted({(m.nrows, m.ncols) for m in mats})
        print(f"   {len(mats)} matrices, shapes {sizes[0]}..{sizes[-1]}")
        reference = None
        for name, impl in backends:
            elapsed, ranks = time_backend(impl, mats)
            if reference is None:
                reference = elapsed
                speedup = ""
            else:
                speedup = f"  ({reference / elapsed:.2f}x vs python)"
            print(f"   {name:>7}: {elapsed * 1000:8.1f} ms{speedup}")
            print(f"            rank checksum {sum(ranks)}")


if __name__ == "__main__":
    main()
