"""Exact sparse linear algebra over the rationals.

Matrices and vectors carry `fractions.Fraction` entries at the API
boundary; internally every computation is handed to an integer
fraction-free elimination kernel (rows are scaled to integers first,
which changes neither row spaces nor solution sets of the encoded
equations). Echelon output is canonical, so two subspaces are equal iff
their `rref` bases are equal.

The kernel backend is selected at import time: the compiled extension
`ospcoho._kernels_cy` when it is available, otherwise the pure-Python
twin. Set OSPCOHO_PURE_PYTHON=1 to force the fallback.
"""

import os
from fractions import Fraction

from . import _kernels_py

if os.environ.get("OSPCOHO_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND_NAME


def _to_int_row(row):
    """Scale a {col: Fraction} row to a primitive {col: int} row."""
    scale = 1
    for v in row.values():
        scale = scale * v.denominator // _gcd(scale, v.denominator)
    out = {}
    for c, v in row.items():
        if v:
            out[c] = v.numerator * (scale // v.denominator)
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _as_fraction_row(row):
    return {c: Fraction(v) for c, v in row.items() if v}


class SparseMatrix:
    """Immutable-by-convention sparse rational matrix, row-major."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [dict() for _ in range(nrows)]
        self.rows = rows

    @classmethod
    def from_entries(cls, nrows, ncols, entries):
        """entries: iterable of (i, j, value)."""
        m = cls(nrows, ncols)
        for i, j, v in entries:
            v = Fraction(v)
            if v:
                m.rows[i][j] = m.rows[i].get(j, Fraction(0)) + v
                if not m.rows[i][j]:
                    del m.rows[i][j]
        return m

    @classmethod
    def from_columns(cls, nrows, columns):
        """columns: list of {row: value} dicts."""
        m = cls(nrows, len(columns))
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    m.rows[i][j] = Fraction(v)
        return m

    def entry(self, i, j):
        return self.rows[i].get(j, Fraction(0))

    def column(self, j):
        return {i: r[j] for i, r in enumerate(self.rows) if j in r}

    def transpose(self):
        t = SparseMatrix(self.ncols, self.nrows)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                t.rows[j][i] = v
        return t

    def mul(self, other):
        """Matrix product self @ other."""
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        out = SparseMatrix(self.nrows, other.ncols)
        for i, row in enumerate(self.rows):
            acc = out.rows[i]
            for j, v in row.items():
                for k, w in other.rows[j].items():
                    s = acc.get(k, Fraction(0)) + v * w
                    if s:
                        acc[k] = s
                    else:
                        del acc[k]
        return out

    def apply(self, vec):
        """Matrix-vector product; vec is {col: Fraction}."""
        out = {}
        for i, row in enumerate(self.rows):
            s = Fraction(0)
            for j, v in row.items():
                if j in vec:
                    s += v * vec[j]
            if s:
                out[i] = s
        return out

    def is_zero(self):
        return all(not r for r in self.rows)

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def dump(self):
        """Matrix-market style text dump, for debugging."""
        lines = [f"% sparse rational {self.nrows} x {self.ncols}"]
        for i, row in enumerate(self.rows):
            for j in sorted(row):
                lines.append(f"{i} {j} {row[j]}")
        return "\n".join(lines)

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def rank(m):
    """Exact rank via fraction-free elimination."""
    rows = [_to_int_row(r) for r in m.rows]
    pivots, _ = _impl.echelon(rows, False)
    return len(pivots)


def rref(vectors, ncols):
    """Canonical reduced row echelon basis of span(vectors).

    vectors: iterable of {col: Fraction|int} dicts. Returns a list of
    {col: Fraction} rows with leading coefficient 1, sorted by pivot
    column; this form is unique for the row space.
    """
    rows = [_to_int_row(_as_fraction_row(v)) for v in vectors]
    pivots, out = _impl.echelon(rows, True)
    result = []
    for col, row in zip(pivots, out):
        piv = Fraction(row[col])
        result.append({c: Fraction(v) / piv for c, v in row.items()})
    return result


def kernel_basis(m):
    """Echelon basis of the null space of m, leading coefficient 1.

    Each returned vector v satisfies m.apply(v) == {} exactly, and there
    are ncols - rank(m) of them.
    """
    rows = [_to_int_row(r) for r in m.rows]
    pivots, out = _impl.echelon(rows, True)
    pivot_set = set(pivots)
    free_cols = [j for j in range(m.ncols) if j not in pivot_set]
    basis = []
    for f in free_cols:
        v = {f: Fraction(1)}
        for col, row in zip(pivots, out):
            if f in row:
                v[col] = Fraction(-row[f], row[col])
        lead = v[min(v)]
        basis.append({c: val / lead for c, val in v.items()})
    return basis


def solve(m, b):
    """Some x with m x = b, or None when the system is inconsistent.

    b is {row: Fraction}. Any returned solution is verified by
    substitution before being handed back.
    """
    aug = m.ncols
    b = {i: Fraction(v) for i, v in b.items() if v}
    rows = []
    for i, row in enumerate(m.rows):
        r = dict(row)
        if i in b:
            r[aug] = b[i]
        if r:
            rows.append(_to_int_row(_as_fraction_row(r)))
    pivots, out = _impl.echelon(rows, True)
    x = {}
    for col, row in zip(pivots, out):
        if col == aug:
            return None
        rhs = Fraction(row.get(aug, 0))
        # free variables are set to 0, so only the rhs survives
        x[col] = rhs / Fraction(row[col])
    x = {c: v for c, v in x.items() if v}
    if m.apply(x) != b:
        return None
    return x


def span_contains(rref_rows, vector):
    """Is `vector` in the span of canonical rref rows?"""
    v = _as_fraction_row(vector)
    for row in rref_rows:
        piv = min(row)
        if piv in v:
            coeff = v[piv]
            for c, w in row.items():
                s = v.get(c, Fraction(0)) - coeff * w
                if s:
                    v[c] = s
                else:
                    v.pop(c, None)
    return not v


def subspace_sum(u_rows, w_rows, ncols):
    return rref(list(u_rows) + list(w_rows), ncols)


def subspace_intersect(u_rows, w_rows, ncols):
    """Canonical basis of span(u) ∩ span(w)."""
    u_rows = list(u_rows)
    w_rows = list(w_rows)
    cols = [dict(r) for r in u_rows]
    cols += [{c: -v for c, v in r.items()} for r in w_rows]
    m = SparseMatrix.from_columns(ncols, cols)
    inter = []
    for kv in kernel_basis(m):
        vec = {}
        for idx, coeff in kv.items():
            if idx < len(u_rows):
                for c, v in u_rows[idx].items():
                    s = vec.get(c, Fraction(0)) + coeff * v
                    if s:
                        vec[c] = s
                    else:
                        vec.pop(c, None)
        if vec:
            inter.append(vec)
    return rref(inter, ncols)


def quotient_dim(u_rows, w_rows):
    """dim(span u / span w); raises if w is not contained in u."""
    for r in w_rows:
        if not span_contains(u_rows, r):
            raise NotContained("quotient by a non-subspace")
    return len(u_rows) - len(w_rows)


class NotContained(ValueError):
    pass
