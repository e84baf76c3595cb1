"""Z-filtered simplicial complexes and filtered covers.

A filtered complex is stored as a map from simplices (sorted vertex tuples)
to integer birth degrees. Slice ``j`` is the subcomplex of simplices with
birth ``<= j``. A simplex that is absent from a cover member simply has no
birth there.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping, Sequence

Simplex = tuple


class ComplexError(ValueError):
    """Invalid simplicial or filtration data."""


class CoverError(ValueError):
    """A family of subcomplexes that is not a valid filtered cover."""


def _canon(simplex: Iterable) -> Simplex:
    s = tuple(sorted(simplex))
    if not s:
        raise ComplexError("empty vertex tuple")
    if len(set(s)) != len(s):
        raise ComplexError(f"repeated vertex in simplex {s}")
    return s


def faces(simplex: Simplex) -> list[Simplex]:
    """Codimension-one faces, ``faces(s)[k]`` omits vertex ``k``."""
    if len(simplex) == 1:
        return []
    return [simplex[:k] + simplex[k + 1:] for k in range(len(simplex))]


def all_faces(simplex: Simplex) -> Iterable[Simplex]:
    for k in range(1, len(simplex) + 1):
        yield from itertools.combinations(simplex, k)


class FilteredComplex:
    """Immutable finite simplicial complex with integer births, monotone on faces."""

    __slots__ = ("_births", "_vertices", "_by_dim")

    def __init__(self, births: Mapping[Simplex, int], *, _trusted: bool = False):
        if not _trusted:
            births = _close_and_check(dict(births))
        self._births = MappingProxyType(dict(births))
        self._vertices = tuple(sorted({v for s in self._births for v in s}))
        by_dim: dict[int, list[Simplex]] = {}
        for s in self._births:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self._by_dim = {d: tuple(sorted(v, key=lambda s: (self._births[s], s))) for d, v in by_dim.items()}

    @property
    def births(self) -> Mapping[Simplex, int]:
        return self._births

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def dim(self) -> int:
        """Dimension; ``-1`` for the empty complex."""
        return max(self._by_dim, default=-1)

    def simplices(self, dim: int | None = None) -> tuple[Simplex, ...]:
        """Simplices ordered by (birth, vertices); all dimensions ordered by (birth, dim, vertices)."""
        if dim is not None:
            return self._by_dim.get(dim, ())
        return tuple(sorted(self._births, key=lambda s: (self._births[s], len(s), s)))

    def birth(self, simplex: Iterable) -> int:
        return self._births[tuple(sorted(simplex))]

    def slice(self, j: int) -> frozenset:
        return frozenset(s for s, b in self._births.items() if b <= j)

    def critical_values(self) -> tuple[int, ...]:
        return tuple(sorted(set(self._births.values())))

    def is_empty(self) -> bool:
        return not self._births

    def restrict(self, simplices: Iterable[Simplex]) -> "FilteredComplex":
        """Subcomplex on the given (face-closed) simplices, births inherited."""
        return FilteredComplex({s: self._births[s] for s in simplices}, _trusted=True)

    def __contains__(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self._births

    def __len__(self) -> int:
        return len(self._births)

    def __iter__(self):
        return iter(self.simplices())

    def __eq__(self, other) -> bool:
        return isinstance(other, FilteredComplex) and dict(self._births) == dict(other._births)

    def __hash__(self) -> int:
        return hash(frozenset(self._births.items()))

    def __repr__(self) -> str:
        return f"FilteredComplex({len(self)} simplices, dim={self.dim})"

    def f_vector(self) -> list[int]:
        return [len(self._by_dim.get(d, ())) for d in range(self.dim + 1)]


def _close_and_check(births: dict[Simplex, int]) -> dict[Simplex, int]:
    """Add missing faces with the minimal birth of their cofaces; reject monotonicity violations."""
    explicit = dict(births)
    out = dict(births)
    top = max((len(s) for s in out), default=0)
    for size in range(top, 1, -1):
        level = [s for s in out if len(s) == size]
        for s in level:
            b = out[s]
            for f in faces(s):
                if f in explicit:
                    if explicit[f] > b:
                        raise ComplexError(
                            f"monotonicity violation: face {f} born at {explicit[f]} after coface {s} born at {b}"
                        )
                elif f not in out or out[f] > b:
                    out[f] = b
    return out


def build_complex(simplices: Iterable[tuple[Iterable, int]]) -> FilteredComplex:
    """Build a filtered complex from ``(vertices, birth)`` pairs, completing face closure.

    A face that is not listed is born together with its earliest listed coface.
    """
    births: dict[Simplex, int] = {}
    for verts, b in simplices:
        s = _canon(verts)
        if isinstance(b, bool) or int(b) != b:
            raise ComplexError(f"birth of {s} must be an integer, got {b!r}")
        b = int(b)
        if s in births and births[s] != b:
            raise ComplexError(f"duplicate simplex {s} with conflicting births {births[s]} and {b}")
        births[s] = b
    return FilteredComplex(births)


def lower_star(complex_: FilteredComplex | Iterable[Iterable], vertex_values: Mapping[Hashable, int]) -> FilteredComplex:
    """Lower-star filtration: each simplex is born at the maximum value of its vertices."""
    if isinstance(complex_, FilteredComplex):
        simplices = list(complex_.births)
    else:
        simplices = set()
        for s in complex_:
            simplices.update(all_faces(_canon(s)))
    births = {}
    for s in simplices:
        missing = [v for v in s if v not in vertex_values]
        if missing:
            raise ComplexError(f"no value for vertices {missing}")
        births[s] = max(int(vertex_values[v]) for v in s)
    return FilteredComplex(births)


def _to_fraction(x) -> Fraction:
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ComplexError(f"non-finite filtration value {x}")
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class GridMap:
    """Floor map of real filtration values onto the integer grid: ``k = floor((r - origin) / epsilon)``."""

    epsilon: Fraction
    origin: Fraction = Fraction(0)

    def __post_init__(self):
        eps = _to_fraction(self.epsilon)
        if eps <= 0:
            raise ComplexError(f"grid step must be positive, got {self.epsilon}")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "origin", _to_fraction(self.origin))

    def index(self, r) -> int:
        return math.floor((_to_fraction(r) - self.origin) / self.epsilon)

    def value(self, k: int) -> Fraction:
        return self.origin + k * self.epsilon


def discretize(real_births: Mapping[Iterable, object], grid: GridMap) -> FilteredComplex:
    """Snap real births to the grid by flooring. Monotone input stays monotone."""
    values = {_canon(s): _to_fraction(b) for s, b in real_births.items()}
    for s, b in values.items():
        for f in faces(s):
            if f in values and values[f] > b:
                raise ComplexError(f"monotonicity violation: face {f} born after coface {s}")
    return build_complex((s, grid.index(b)) for s, b in values.items())


@dataclass(frozen=True)
class FilteredCover:
    """Indexed family of filtered subcomplexes whose slice-wise union is the ambient complex.

    ``indices`` fixes the total order on the index set (declaration order).
    """

    ambient: FilteredComplex
    indices: tuple
    members: tuple[FilteredComplex, ...]
    _position: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.indices) != len(self.members):
            raise CoverError("indices and members differ in length")
        if len(set(self.indices)) != len(self.indices):
            raise CoverError("duplicate cover index")
        object.__setattr__(self, "_position", {i: k for k, i in enumerate(self.indices)})
        problems = compatibility_problems(self.ambient, self.members)
        if problems:
            raise CoverError("; ".join(problems[:10]) + (" ..." if len(problems) > 10 else ""))

    def __len__(self) -> int:
        return len(self.members)

    def position(self, index) -> int:
        try:
            return self._position[index]
        except KeyError:
            raise CoverError(f"unknown cover index {index!r}") from None

    def member(self, index) -> FilteredComplex:
        return self.members[self.position(index)]

    def items(self):
        return zip(self.indices, self.members)

    def membership(self) -> dict[Simplex, tuple[int, ...]]:
        """Positions of the members containing each ambient simplex."""
        out: dict[Simplex, list[int]] = {s: [] for s in self.ambient.births}
        for k, m in enumerate(self.members):
            for s in m.births:
                out[s].append(k)
        return {s: tuple(v) for s, v in out.items()}

    def is_induced(self) -> bool:
        amb = self.ambient.births
        return all(b == amb[s] for m in self.members for s, b in m.births.items())


def compatibility_problems(ambient: FilteredComplex, members: Sequence[FilteredComplex]) -> list[str]:
    """Every violation of the cover axioms (subcomplex, covering, min-rule); empty if valid."""
    problems = []
    amb = ambient.births
    best: dict[Simplex, int] = {}
    for k, m in enumerate(members):
        for s, b in m.births.items():
            if s not in amb:
                problems.append(f"member {k} contains {s}, which is not in the ambient complex")
                continue
            if s not in best or b < best[s]:
                best[s] = b
    uncovered = sorted((s for s in amb if s not in best), key=lambda s: (len(s), s))
    if uncovered:
        problems.append(f"uncovered simplices: {uncovered}")
    for s, b in best.items():
        if s in amb and amb[s] != b:
            problems.append(f"simplex {s}: ambient birth {amb[s]} but minimum member birth {b}")
    return problems


def check_cover(cover: FilteredCover) -> bool:
    """Re-verify the min-rule and covering conditions from scratch."""
    return not compatibility_problems(cover.ambient, cover.members)


def _closure(simplices: Iterable[Iterable]) -> set[Simplex]:
    out: set[Simplex] = set()
    for s in simplices:
        c = _canon(s)
        if c not in out:
            out.update(all_faces(c))
    return out


def induced_cover(ambient: FilteredComplex, assignment: Mapping[Hashable, Iterable[Iterable]]) -> FilteredCover:
    """Filtered cover with member filtrations restricted from the ambient one.

    Each member is given by simplices of ``ambient``; faces are added so that
    listing maximal simplices is enough.
    """
    indices, members = [], []
    for idx, simplices in assignment.items():
        closed = _closure(simplices)
        foreign = sorted(s for s in closed if s not in ambient)
        if foreign:
            raise CoverError(f"member {idx!r} lists simplices not in the ambient complex: {foreign[:5]}")
        indices.append(idx)
        members.append(ambient.restrict(closed))
    return FilteredCover(ambient, tuple(indices), tuple(members))


def cover_from_members(
    members: Mapping[Hashable, FilteredComplex], ambient: FilteredComplex | None = None
) -> FilteredCover:
    """General filtered cover; without ``ambient`` the ambient births follow the min rule."""
    if ambient is None:
        births: dict[Simplex, int] = {}
        for m in members.values():
            for s, b in m.births.items():
                if s not in births or b < births[s]:
                    births[s] = b
        ambient = FilteredComplex(births, _trusted=True)
    return FilteredCover(ambient, tuple(members), tuple(members.values()))


def intersection(cover: FilteredCover, index_set: Iterable) -> FilteredComplex:
    """Filtered intersection ``U_I``: common simplices, born at the latest member birth.

    May be empty.
    """
    idx = list(index_set)
    if not idx:
        raise CoverError("empty index set")
    positions = [cover.position(i) for i in idx]
    return intersection_at(cover, positions)


def intersection_at(cover: FilteredCover, positions: Sequence[int]) -> FilteredComplex:
    ms = [cover.members[k] for k in positions]
    ms.sort(key=len)
    first, rest = ms[0], ms[1:]
    births = {}
    for s, b in first.births.items():
        for m in rest:
            mb = m.births.get(s)
            if mb is None:
                break
            if mb > b:
                b = mb
        else:
            births[s] = b
    return FilteredComplex(births, _trusted=True)
