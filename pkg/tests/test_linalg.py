"""Exact linear algebra against a naive dense oracle."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ospcoho import linalg
from ospcoho.linalg import SparseMatrix


# independent dense oracle, kept deliberately naive
from tests_support_dense import dense_rank  # noqa: E402


def random_sparse(rng, nrows, ncols, density=0.3):
    entries = []
    for i in range(nrows):
        for j in range(ncols):
            if rng.random() < density:
                num = rng.randint(-6, 6)
                den = rng.randint(1, 4)
                if num:
                    entries.append((i, j, Fraction(num, den)))
    return SparseMatrix.from_entries(nrows, ncols, entries)


def test_identity_and_zero_rank():
    ident = SparseMatrix.from_entries(
        5, 5, [(i, i, 1) for i in range(5)])
    assert linalg.rank(ident) == 5
    assert linalg.rank(SparseMatrix(4, 7)) == 0


def test_kernel_of_identity_is_empty():
    ident = SparseMatrix.from_entries(3, 3, [(i, i, 1) for i in range(3)])
    assert linalg.kernel_basis(ident) == []


def test_kernel_one_one_matrix():
    m = SparseMatrix.from_entries(1, 2, [(0, 0, 1), (0, 1, 1)])
    assert linalg.kernel_basis(m) == [{0: Fraction(1), 1: Fraction(-1)}]


def test_rank_matches_dense_oracle_on_100_matrices():
    rng = random.Random(12345)
    for _ in range(100):
        nrows = rng.randint(1, 30)
        ncols = rng.randint(1, 30)
        m = random_sparse(rng, nrows, ncols)
        assert linalg.rank(m) == dense_rank(m)


def test_kernel_annihilates_and_rank_nullity():
    rng = random.Random(777)
    for _ in range(25):
        m = random_sparse(rng, rng.randint(1, 20), rng.randint(1, 30))
        kern = linalg.kernel_basis(m)
        assert len(kern) == m.ncols - linalg.rank(m)
        for v in kern:
            assert m.apply(v) == {}


def test_solve_constructed_systems():
    rng = random.Random(99)
    for _ in range(25):
        m = random_sparse(rng, rng.randint(1, 15), rng.randint(1, 15))
        x0 = {j: Fraction(rng.randint(-3, 3), rng.randint(1, 3))
              for j in range(m.ncols) if rng.random() < 0.5}
        b = m.apply(x0)
        x = linalg.solve(m, b)
        assert x is not None
        assert m.apply(x) == b


def test_solve_detects_inconsistency():
    m = SparseMatrix(2, 3)  # zero matrix
    assert linalg.solve(m, {0: Fraction(1)}) is None
    ident = SparseMatrix.from_entries(3, 3, [(i, i, 1) for i in range(3)])
    b = {0: Fraction(2), 2: Fraction(-1, 3)}
    assert linalg.solve(ident, b) == b


def test_rref_is_canonical_under_row_shuffles():
    rng = random.Random(5)
    vecs = [{0: Fraction(2), 2: Fraction(1)},
            {0: Fraction(1), 1: Fraction(1)},
            {1: Fraction(-1), 2: Fraction(1, 2)}]
    ref = linalg.rref(vecs, 4)
    for _ in range(6):
        shuffled = vecs[:]
        rng.shuffle(shuffled)
        scales = [Fraction(rng.randint(1, 5)) for _ in shuffled]
        scaled = [{c: v * s for c, v in r.items()}
                  for r, s in zip(shuffled, scales)]
        assert linalg.rref(scaled, 4) == ref


def _subspace(rng, ncols, nvecs):
    vecs = []
    for _ in range(nvecs):
        v = {j: Fraction(rng.randint(-4, 4)) for j in range(ncols)
             if rng.random() < 0.4}
        v = {c: x for c, x in v.items() if x}
        if v:
            vecs.append(v)
    return linalg.rref(vecs, ncols)


def test_grassmann_dimension_identity():
    rng = random.Random(31)
    ncols = 8
    for _ in range(20):
        u = _subspace(rng, ncols, 4)
        w = _subspace(rng, ncols, 4)
        s = linalg.subspace_sum(u, w, ncols)
        i = linalg.subspace_intersect(u, w, ncols)
        assert len(s) + len(i) == len(u) + len(w)
        for v in i:
            assert linalg.span_contains(u, v)
            assert linalg.span_contains(w, v)


def test_subspace_self_operations():
    rng = random.Random(8)
    u = _subspace(rng, 6, 3)
    assert linalg.subspace_intersect(u, u, 6) == u
    assert linalg.subspace_sum(u, u, 6) == u
    assert linalg.quotient_dim(u, []) == len(u)
    with pytest.raises(linalg.NotContained):
        linalg.quotient_dim([], [{0: Fraction(1)}])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.fractions(min_value=-5, max_value=5),
                         min_size=4, max_size=4),
                min_size=1, max_size=6))
def test_rank_nullity_property(rows):
    entries = [(i, j, v) for i, row in enumerate(rows)
               for j, v in enumerate(row) if v]
    m = SparseMatrix.from_entries(len(rows), 4, entries)
    assert linalg.rank(m) + len(linalg.kernel_basis(m)) == 4


def test_backends_agree():
    from ospcoho import _kernels_py
    try:
        from ospcoho import _kernels_cy
    except ImportError:
        pytest.skip("compiled kernel not built")
    rng = random.Random(4242)
    for _ in range(30):
        nrows, ncols = rng.randint(1, 12), rng.randint(1, 12)
        rows = []
        for _ in range(nrows):
            row = {j: rng.randint(-9, 9) for j in range(ncols)
                   if rng.random() < 0.5}
            rows.append({c: v for c, v in row.items() if v})
        for full in (False, True):
            a = _kernels_py.echelon([dict(r) for r in rows], full)
            b = _kernels_cy.echelon([dict(r) for r in rows], full)
            assert a == b


def test_matrix_dump_and_mul():
    a = SparseMatrix.from_entries(2, 2, [(0, 0, 1), (0, 1, 2), (1, 1, 3)])
    b = SparseMatrix.from_entries(2, 1, [(0, 0, 1), (1, 0, Fraction(1, 3))])
    prod = a.mul(b)
    assert prod.entry(0, 0) == Fraction(5, 3)
    assert prod.entry(1, 0) == 1
    assert "sparse rational 2 x 2" in a.dump()
