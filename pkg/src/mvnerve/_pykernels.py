"""Pure-Python reference versions of the compiled kernels in ``_kernels.pyx``."""

from __future__ import annotations

import numpy as np


def reduce_columns(rows, coeffs, dims, p, clearing=True):
    """Reduce a filtered boundary matrix; return the pivot row of every column (-1 if zero).

    Over F_2 columns are Python-int bitsets, otherwise ``{row: coeff}`` dicts.
    """
    n = len(rows)
    low = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return low
    dims = [int(d) for d in dims]
    owner: dict[int, int] = {}
    cleared: set[int] = set()
    if p == 2:
        cols = []
        for r, v in zip(rows, coeffs):
            bits = 0
            for i, x in zip(r.tolist(), v.tolist()):
                if x % 2:
                    bits ^= 1 << i
            cols.append(bits)
        for d in range(max(dims), 0, -1):
            for c in range(n):
                if dims[c] != d:
                    continue
                if clearing and c in cleared:
                    cols[c] = 0
                    continue
                col = cols[c]
                while col:
                    piv = col.bit_length() - 1
                    o = owner.get(piv)
                    if o is None:
                        break
                    col ^= cols[o]
                cols[c] = col
                if col:
                    piv = col.bit_length() - 1
                    owner[piv] = c
                    low[c] = piv
                    cleared.add(piv)
        return low

    dcols: list[dict[int, int]] = []
    for r, v in zip(rows, coeffs):
        col: dict[int, int] = {}
        for i, x in zip(r.tolist(), v.tolist()):
            col[i] = (col.get(i, 0) + x) % p
        dcols.append({i: x for i, x in col.items() if x})
    for d in range(max(dims), 0, -1):
        for c in range(n):
            if dims[c] != d:
                continue
            if clearing and c in cleared:
                dcols[c] = {}
                continue
            col = dcols[c]
            while col:
                piv = max(col)
                o = owner.get(piv)
                if o is None:
                    break
                other = dcols[o]
                factor = col[piv] * pow(other[piv], p - 2, p) % p
                for i, x in other.items():
                    y = (col.get(i, 0) - factor * x) % p
                    if y:
                        col[i] = y
                    else:
                        col.pop(i, None)
            if col:
                piv = max(col)
                owner[piv] = c
                low[c] = piv
                cleared.add(piv)
    return low


def rref_inplace(a, p):
    """Gauss-Jordan elimination mod p in place; return the list of pivot columns."""
    m, n = a.shape
    r = 0
    pivots = []
    np.remainder(a, p, out=a)
    for c in range(n):
        if r >= m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        sel = r + int(nz[0])
        if sel != r:
            a[[r, sel]] = a[[sel, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        f = a[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            a[rows, c:] = (a[rows, c:] - np.outer(f[rows], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return pivots
