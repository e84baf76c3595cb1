"""Closed-form barcodes for the sphere and bipyramid examples, transcribed by hand.

Keys are cover index sets (tuples); values are ``{degree: [(birth, death)]}``.
"""

from __future__ import annotations

import itertools

INF = float("inf")


def _subsets(vs):
    vs = list(vs)
    for k in range(1, len(vs) + 1):
        yield from itertools.combinations(vs, k)


def sphere_intersections(D):
    out = {}
    full = tuple(range(D + 2))
    for I in _subsets(full):
        if len(I) == D + 2:
            continue
        bc = {}
        n = len(I)
        q = D - n
        if q > 0 and I == tuple(range(q + 2, D + 2)):
            bc[q] = [(2 * q + 2, 2 * q + 4)]
        if I == tuple(range(2, D + 2)):
            bc[0] = [(0, INF), (2, 4)]
        elif I == tuple(range(1, D + 2)):
            bc[0] = [(2, INF)]
        else:
            bc[0] = [(0, INF)]
        out[I] = bc
    return out


def bipyramid_intersections(D):
    out = {}
    mid = tuple(range(1, D + 2))
    for I in _subsets(mid):
        bc = {}
        q = D + 1 - len(I)
        if q > 0 and I == tuple(range(q + 1, D + 2)):
            bc[q] = [(2 * q, 2 * q + 2)]
        bc[0] = [(-2 * D, INF), (0, 2)] if q == 0 else [(-2 * D, INF)]
        out[I] = bc
    for I in [()] + list(_subsets(mid)):
        out[(0,) + I] = {0: [(0, INF)] if I == mid else [(-2 * D, INF)]}
    return out


def sphere_pages(D):
    """Nonempty cells of ``E^r`` for ``r = 2 .. D+1`` (the last one is ``E^inf``)."""
    pages = {}
    for r in range(2, D + 2):
        cells = {(0, 0): [(0, INF)], (D, 0): [(2 * r, INF)]}
        for q in range(1, D):
            if q >= r - 1:
                cells[(D - q - 1, q)] = [(2 * q + 2, 2 * q + 4)]
        pages[r] = cells
    return pages


def bipyramid_page(D):
    """``E^2 = E^inf``."""
    cells = {(0, 0): [(-2 * D, INF)], (D, 0): [(-2 * D, 2)]}
    for q in range(1, D + 1):
        cells[(D - q, q)] = [(2 * q, 2 * q + 2)]
    return cells


def sphere_e1(D):
    out = {}
    for I, bc in sphere_intersections(D).items():
        for q, bars in bc.items():
            out.setdefault((len(I) - 1, q), []).extend(bars)
    return {k: sorted(v) for k, v in out.items()}


def bipyramid_e1(D):
    out = {}
    for I, bc in bipyramid_intersections(D).items():
        for q, bars in bc.items():
            out.setdefault((len(I) - 1, q), []).extend(bars)
    return {k: sorted(v) for k, v in out.items()}
