"""Seeded random complexes and covers for the property suites."""

from __future__ import annotations

import itertools

import numpy as np

from .complex import FilteredComplex, FilteredCover, all_faces, cover_from_members, faces, induced_cover


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def monotone_births(simplices, rng, low: int = 0, high: int = 6) -> dict:
    """Random births, pushed up where needed so that faces are born first."""
    out = {}
    for s in sorted(simplices, key=len):
        b = int(rng.integers(low, high + 1))
        for f in faces(s):
            b = max(b, out[f])
        out[s] = b
    return out


def flag_complex(n_vertices: int, edge_prob: float, max_dim: int, rng) -> set:
    rng = _rng(rng)
    edges = {(u, v) for u, v in itertools.combinations(range(n_vertices), 2) if rng.random() < edge_prob}
    simplices = {(v,) for v in range(n_vertices)} | edges
    level = edges
    for _ in range(2, max_dim + 1):
        nxt = set()
        for s in level:
            for v in range(s[-1] + 1, n_vertices):
                if all((u, v) in edges for u in s):
                    nxt.add(s + (v,))
        simplices |= nxt
        level = nxt
    return simplices


def random_flag_complex(rng, n_vertices: int = 7, edge_prob: float = 0.5, max_dim: int = 2, high: int = 6) -> FilteredComplex:
    rng = _rng(rng)
    return FilteredComplex(monotone_births(flag_complex(n_vertices, edge_prob, max_dim, rng), rng, 0, high))


def maximal_simplices(simplices) -> list:
    ss = set(simplices)
    out = []
    for s in ss:
        if not any(len(t) == len(s) + 1 and set(s) < set(t) for t in ss):
            out.append(s)
    return sorted(out)


def _assign(maximal, n_members, rng) -> list[list]:
    groups = [[] for _ in range(n_members)]
    order = list(maximal)
    rng.shuffle(order)
    for k, s in enumerate(order):
        # the first few go round-robin so that no member is empty
        if k < n_members:
            groups[k].append(s)
        else:
            groups[int(rng.integers(n_members))].append(s)
        if rng.random() < 0.3:
            groups[int(rng.integers(n_members))].append(s)
    return groups


def random_induced_cover(X: FilteredComplex, n_members: int, rng) -> FilteredCover:
    rng = _rng(rng)
    n_members = min(n_members, len(maximal_simplices(X.births)))
    groups = _assign(maximal_simplices(X.births), n_members, rng)
    return induced_cover(X, {i: g for i, g in enumerate(groups)})


def random_general_cover(simplices, n_members: int, rng, high: int = 6) -> FilteredCover:
    """Cover whose members carry their own filtrations; the ambient one follows the min rule."""
    rng = _rng(rng)
    maximal = maximal_simplices(simplices)
    n_members = min(n_members, len(maximal))
    groups = _assign(maximal, n_members, rng)
    members = {}
    for i, g in enumerate(groups):
        closed = set()
        for s in g:
            closed.update(all_faces(s))
        members[i] = FilteredComplex(monotone_births(closed, rng, 0, high))
    return cover_from_members(members)


def simplex_union(n_vertices: int, n_simplices: int, max_size: int, rng) -> list[tuple]:
    rng = _rng(rng)
    out = []
    for _ in range(n_simplices):
        k = int(rng.integers(1, max_size + 1))
        out.append(tuple(sorted(rng.choice(n_vertices, size=min(k, n_vertices), replace=False).tolist())))
    return out


def random_good_cover(rng, n_vertices: int = 8, n_members: int = 4, max_size: int = 4, high: int = 6):
    """Union of full simplices with a lower-star filtration, covered by those simplices.

    Every slice of every intersection is a full simplex or empty, so the cover
    is persistently acyclic.
    """
    rng = _rng(rng)
    tops = simplex_union(n_vertices, n_members, max_size, rng)
    values = {v: int(rng.integers(0, high + 1)) for v in range(n_vertices)}
    births = {}
    for t in tops:
        for f in all_faces(t):
            births[f] = max(values[v] for v in f)
    X = FilteredComplex(births)
    return X, induced_cover(X, {i: [t] for i, t in enumerate(tops)})


def random_acyclic_cover(rng, n_vertices: int = 8, n_members: int = 4, max_size: int = 4, high: int = 6):
    """Full simplices with arbitrary monotone births: every intersection is eventually contractible."""
    rng = _rng(rng)
    tops = simplex_union(n_vertices, n_members, max_size, rng)
    closed = set()
    for t in tops:
        closed.update(all_faces(t))
    X = FilteredComplex(monotone_births(closed, rng, 0, high))
    return X, induced_cover(X, {i: [t] for i, t in enumerate(tops)})


def random_instance(rng, max_simplices: int = 300, n_members: tuple[int, int] = (2, 5), n_vertices: tuple[int, int] = (4, 9),
                    max_dim: int = 3, general: float = 0.3):
    """A random filtered complex with a random cover of 2-5 elements (induced or general)."""
    rng = _rng(rng)
    while True:
        n = int(rng.integers(n_vertices[0], n_vertices[1] + 1))
        simplices = flag_complex(n, float(rng.uniform(0.3, 0.8)), max_dim, rng)
        if len(simplices) <= max_simplices:
            break
    k = int(rng.integers(n_members[0], n_members[1] + 1))
    if rng.random() < general:
        cover = random_general_cover(simplices, k, rng)
    else:
        X = FilteredComplex(monotone_births(simplices, rng))
        cover = random_induced_cover(X, k, rng)
    return cover.ambient, cover


def random_facet_cover(rng, D: int = 2, high: int = 6, general: bool = True):
    """Boundary of a (D+1)-simplex covered by its facets, with random filtrations.

    Nerves here are spheres, so higher differentials are frequently nonzero.
    """
    rng = _rng(rng)
    verts = range(D + 2)
    if general:
        members = {}
        for i in verts:
            closed = set(all_faces(tuple(v for v in verts if v != i)))
            members[i] = FilteredComplex(monotone_births(closed, rng, 0, high))
        cover = cover_from_members(members)
        return cover.ambient, cover
    closed = set()
    for i in verts:
        closed.update(all_faces(tuple(v for v in verts if v != i)))
    X = FilteredComplex(monotone_births(closed, rng, 0, high))
    return X, induced_cover(X, {i: [tuple(v for v in verts if v != i)] for i in verts})
