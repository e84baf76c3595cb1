# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled hot loops: sparse column reduction and dense row reduction over F_p.

Both functions mirror :mod:`mvnerve._pykernels` exactly; the Python versions
are the reference and the test-suite checks the two agree.
"""

import numpy as np
cimport numpy as cnp
from libcpp.vector cimport vector
from libcpp.pair cimport pair

ctypedef pair[long, long] entry
ctypedef vector[entry] column

cnp.import_array()


cdef long _inv(long a, long p):
    # Fermat; p is prime and a != 0 mod p.
    cdef long result = 1, base = a % p, e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


cdef void _axpy(column& target, const column& other, long factor, long p, column& scratch):
    """target <- target - factor * other, entries kept sorted by row."""
    scratch.clear()
    cdef size_t i = 0, j = 0
    cdef size_t n = target.size(), m = other.size()
    cdef long v
    while i < n or j < m:
        if j >= m or (i < n and target[i].first < other[j].first):
            scratch.push_back(target[i])
            i += 1
        elif i >= n or other[j].first < target[i].first:
            v = (p - (factor * other[j].second) % p) % p
            if v != 0:
                scratch.push_back(entry(other[j].first, v))
            j += 1
        else:
            v = (target[i].second - factor * other[j].second) % p
            if v < 0:
                v += p
            if v != 0:
                scratch.push_back(entry(target[i].first, v))
            i += 1
            j += 1
    target.swap(scratch)


def reduce_columns(list rows, list coeffs, cnp.int64_t[:] dims, long p, bint clearing=True):
    """Reduce a filtered boundary matrix; return the pivot row of every column (-1 if zero).

    ``rows[c]``/``coeffs[c]`` hold column ``c`` (row indices < c, any order).
    Columns are processed by decreasing dimension so that clearing applies.
    """
    cdef Py_ssize_t n = len(rows)
    cdef vector[column] cols
    cols.resize(n)
    cdef Py_ssize_t c, k
    cdef cnp.int64_t[:] r_view
    cdef cnp.int64_t[:] v_view
    cdef long v
    for c in range(n):
        r_view = rows[c]
        v_view = coeffs[c]
        for k in range(r_view.shape[0]):
            v = v_view[k] % p
            if v < 0:
                v += p
            if v != 0:
                cols[c].push_back(entry(r_view[k], v))
        _sort_merge(cols[c], p)

    low_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[:] low = low_arr
    cdef vector[long] owner
    owner.assign(n, -1)
    cdef vector[char] cleared
    cleared.assign(n, 0)
    cdef column scratch
    cdef long maxdim = 0
    for c in range(n):
        if dims[c] > maxdim:
            maxdim = dims[c]
    cdef long d, piv, o, factor
    for d in range(maxdim, 0, -1):
        for c in range(n):
            if dims[c] != d:
                continue
            if clearing and cleared[c]:
                cols[c].clear()
                continue
            while cols[c].size() > 0:
                piv = cols[c].back().first
                o = owner[piv]
                if o < 0:
                    break
                factor = (cols[c].back().second * _inv(cols[o].back().second, p)) % p
                _axpy(cols[c], cols[o], factor, p, scratch)
            if cols[c].size() > 0:
                piv = cols[c].back().first
                owner[piv] = c
                low[c] = piv
                cleared[piv] = 1
    return low_arr


cdef void _sort_merge(column& col, long p):
    # insertion sort; input columns are short
    cdef size_t i, j
    cdef entry tmp
    for i in range(1, col.size()):
        tmp = col[i]
        j = i
        while j > 0 and col[j - 1].first > tmp.first:
            col[j] = col[j - 1]
            j -= 1
        col[j] = tmp
    cdef column out
    cdef long v
    i = 0
    while i < col.size():
        v = col[i].second
        j = i + 1
        while j < col.size() and col[j].first == col[i].first:
            v += col[j].second
            j += 1
        v %= p
        if v != 0:
            out.push_back(entry(col[i].first, v))
        i = j
    col.swap(out)


def rref_inplace(cnp.int64_t[:, :] a, long p):
    """Gauss-Jordan elimination mod p in place; return the list of pivot columns.

    Entries must already lie in ``[0, p)``. Only the nonzero entries of the
    pivot row are propagated, which is what makes sparse inputs cheap.
    """
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, k, sel, t, nnz
    cdef long f, inv, v
    cdef vector[Py_ssize_t] nz
    pivots = []
    for c in range(n):
        if r >= m:
            break
        sel = -1
        for i in range(r, m):
            if a[i, c] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            for k in range(c, n):
                a[r, k], a[sel, k] = a[sel, k], a[r, k]
        nz.clear()
        if p == 2:
            for k in range(c, n):
                if a[r, k] != 0:
                    nz.push_back(k)
            nnz = nz.size()
            for i in range(m):
                if i != r and a[i, c] != 0:
                    for t in range(nnz):
                        k = nz[t]
                        a[i, k] ^= 1
        else:
            inv = _inv(a[r, c], p)
            for k in range(c, n):
                if a[r, k] != 0:
                    a[r, k] = (a[r, k] * inv) % p
                    nz.push_back(k)
            nnz = nz.size()
            for i in range(m):
                if i == r:
                    continue
                f = a[i, c]
                if f == 0:
                    continue
                f = p - f
                for t in range(nnz):
                    k = nz[t]
                    v = (a[i, k] + f * a[r, k]) % p
                    a[i, k] = v
        pivots.append(c)
        r += 1
    return pivots
