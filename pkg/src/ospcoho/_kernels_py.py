"""Integer row-elimination kernel, pure-Python backend.

A matrix is a list of sparse rows, each row a dict {column: int}. All
arithmetic is fraction-free: eliminations cross-multiply whole rows and
every updated row is divided by the gcd of its entries, which keeps the
integers small (Bareiss-style growth control) without ever leaving Z.

`ospcoho._kernels_cy` is the compiled twin of this module; both must
produce bit-identical output, which the test suite checks.
"""

from math import gcd

BACKEND_NAME = "python"


def normalize_row(row):
    """Divide `row` by the gcd of its entries; make the leading entry > 0.

    Mutates and returns `row`. The leading entry is the one in the
    smallest column.
    """
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if row[min(row)] < 0:
        g = -g
    if g != 1:
        for c in row:
            row[c] //= g
    return row


def eliminate(row, piv_row, col):
    """row := piv*row - row[col]*piv_row, content-normalized.

    `piv_row` must have an entry at `col`; afterwards `row` has none.
    """
    factor = row.pop(col)
    piv = piv_row[col]
    for c, v in row.items():
        row[c] = v * piv
    for c, v in piv_row.items():
        if c == col:
            continue
        w = row.get(c, 0) - factor * v
        if w:
            row[c] = w
        else:
            row.pop(c, None)
    return normalize_row(row)


def echelon(rows, full):
    """Row-reduce integer rows; returns (pivot_cols, reduced_rows).

    Rows are consumed (mutated). Output rows are primitive (content 1,
    positive pivot) and sorted by pivot column. With full=True every
    pivot column is also cleared above its pivot, giving the integer
    reduced row echelon form, which is unique for a given row space.
    Pivot rows are picked among candidates by sparsity.
    """
    work = [normalize_row(r) for r in rows if r]
    done = []
    pivots = []
    while work:
        col = min(min(r) for r in work)
        best = -1
        best_key = None
        for idx, r in enumerate(work):
            if col in r:
                key = (len(r), abs(r[col]))
                if best < 0 or key < best_key:
                    best, best_key = idx, key
        piv_row = work.pop(best)
        nxt = []
        for r in work:
            if col in r:
                r = eliminate(r, piv_row, col)
            if r:
                nxt.append(r)
        work = nxt
        done.append(piv_row)
        pivots.append(col)
    if full:
        for i in range(len(done) - 1, -1, -1):
            piv_row = done[i]
            col = pivots[i]
            for j in range(i):
                if col in done[j]:
                    done[j] = eliminate(done[j], piv_row, col)
    return pivots, done
