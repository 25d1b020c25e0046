# cython: language_level=3, boundscheck=False, wraparound=False
"""Integer row-elimination kernel, compiled backend.

Same algorithm and same output as `ospcoho._kernels_py`; rows are dicts
{column: int} and arithmetic stays in arbitrary-precision integers. The
speedup comes from compiled loop bookkeeping, not from changing the
numerics.
"""

from math import gcd

BACKEND_NAME = "cython"


cpdef dict normalize_row(dict row):
    cdef object g, v
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


cpdef dict eliminate(dict row, dict piv_row, object col):
    cdef object factor, piv, c, v, w
    factor = row.pop(col)
    piv = piv_row[col]
    for c in row:
        row[c] = row[c] * piv
    for c, v in piv_row.items():
        if c == col:
            continue
        w = row.get(c, 0) - factor * v
        if w:
            row[c] = w
        else:
            row.pop(c, None)
    return normalize_row(row)


def echelon(rows, bint full):
    cdef list work, done, nxt, pivots
    cdef dict r, piv_row
    cdef Py_ssize_t idx, best, i, j
    cdef object col
    work = [normalize_row(r) for r in rows if r]
    done = []
    pivots = []
    while work:
        col = min(min(r) for r in work)
        best = -1
        best_key = None
        for idx in range(len(work)):
            r = work[idx]
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
                if col in (<dict>done[j]):
                    done[j] = eliminate(done[j], piv_row, col)
    return pivots, done
