"""The two families of covers on which the nerve bounds are attained.

``sphere``: the boundary of the (D+1)-simplex on ``[0, D+1]``, covered by its
facets ``U_i`` (the faces omitting ``i``), filtered by adding one cover
element every two steps.

``bipyramid``: two cones over a subdivided sphere on ``[0, D+3]``; the part
``A`` away from vertex 0 is present from degree ``-2D``.
"""

from __future__ import annotations

import itertools

from .complex import ComplexError, FilteredComplex, FilteredCover, induced_cover


def _subsets(vertices):
    vs = sorted(vertices)
    for k in range(1, len(vs) + 1):
        yield from itertools.combinations(vs, k)


def generate_sphere_example(D: int) -> tuple[FilteredComplex, FilteredCover]:
    """Sphere ``∂Δ^{D+1}`` with birth ``2 * min{i : i not in σ}``; ``D = 0`` gives two points."""
    if isinstance(D, bool) or int(D) != D or D < 0:
        raise ComplexError(f"sphere example needs an integer D >= 0, got {D!r}")
    D = int(D)
    verts = range(D + 2)
    births = {}
    for s in _subsets(verts):
        if len(s) == D + 2:
            continue
        births[s] = 2 * min(i for i in verts if i not in s)
    X = FilteredComplex(births)
    assignment = {i: [s for s in births if i not in s] for i in verts}
    return X, induced_cover(X, assignment)


def _in_bipyramid(s, D) -> bool:
    middle = set(range(1, D + 2))
    return not middle <= set(s) and not {D + 2, D + 3} <= set(s)


def generate_bipyramid_example(D: int) -> tuple[FilteredComplex, FilteredCover]:
    """Bipyramid cover with ``U_0`` the cone with apex ``D+3`` and ``U_i`` the full subcomplex on ``[0, D+2] - {i}``."""
    if isinstance(D, bool) or int(D) != D or D < 1:
        raise ComplexError(f"bipyramid example needs an integer D >= 1, got {D!r}")
    D = int(D)
    members = {0: set(range(D + 2)) | {D + 3}}
    for i in range(1, D + 2):
        members[i] = set(range(D + 3)) - {i}
    simplices = [s for s in _subsets(range(D + 4)) if _in_bipyramid(s, D)]
    births = {}
    for s in simplices:
        if 0 not in s:
            births[s] = -2 * D
        else:
            births[s] = 2 * min(j for j, vs in members.items() if set(s) <= vs)
    X = FilteredComplex(births)
    assignment = {j: [s for s in simplices if set(s) <= vs] for j, vs in members.items()}
    return X, induced_cover(X, assignment)


EXAMPLES = {"sphere": generate_sphere_example, "bipyramid": generate_bipyramid_example}
