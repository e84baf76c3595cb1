"""Nerves of filtered covers and ε-acyclicity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .complex import FilteredComplex, FilteredCover
from .modules import doubled, point_distance
from .persistence import INF, barcode

STRATEGIES = ("min", "max", "average")


def nonempty_intersections(cover: FilteredCover, max_card: int | float = math.inf) -> Iterator[tuple[tuple[int, ...], FilteredComplex]]:
    """Yield ``(positions, U_I)`` for every nonempty intersection, by increasing ``|I|``.

    Supersets of an empty intersection are skipped, so the search only
    touches the nerve itself.
    """
    level = []
    for k, m in enumerate(cover.members):
        if not m.is_empty():
            level.append(((k,), m))
    size = 1
    while level and size <= max_card:
        yield from level
        if size + 1 > max_card:
            break
        nxt = []
        for pos, u in level:
            for k in range(pos[-1] + 1, len(cover.members)):
                other = cover.members[k].births
                births = {}
                for s, b in u.births.items():
                    ob = other.get(s)
                    if ob is not None:
                        births[s] = max(b, ob)
                if births:
                    nxt.append((pos + (k,), FilteredComplex(births, _trusted=True)))
        level = nxt
        size += 1


def _g(u: FilteredComplex, strategy: str) -> int:
    vals = list(u.births.values())
    if strategy == "min":
        return min(vals)
    if strategy == "max":
        return max(vals)
    if strategy == "average":
        return math.floor(Fraction(sum(vals), len(vals)))
    raise ValueError(f"unknown nerve strategy {strategy!r}; expected one of {STRATEGIES}")


@dataclass(frozen=True)
class NerveComplex:
    """Filtered nerve; simplices are tuples of cover positions (declaration order)."""

    complex: FilteredComplex
    cover: FilteredCover
    intersections: dict = field(repr=False)
    strategy: str = "min"

    @property
    def dim(self) -> int:
        return self.complex.dim

    def labels(self, simplex: tuple[int, ...]) -> tuple:
        return tuple(self.cover.indices[k] for k in simplex)

    def labelled_births(self) -> dict[tuple, int]:
        return {self.labels(s): b for s, b in self.complex.births.items()}


def nerve(cover: FilteredCover, max_card: int | float | None = None, strategy: str = "min") -> NerveComplex:
    """Nerve filtered by ``g(I)``: by default the first slice where ``U_I`` is nonempty.

    ``max_card`` defaults to ``dim X + 2``.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown nerve strategy {strategy!r}; expected one of {STRATEGIES}")
    if max_card is None:
        max_card = cover.ambient.dim + 2
    inter = dict(nonempty_intersections(cover, max_card))
    births = {pos: _g(u, strategy) for pos, u in inter.items()}
    if strategy != "min":
        # the alternates need not be monotone; force it so the result is still a filtration
        for pos in sorted(births, key=len, reverse=True):
            for k in range(len(pos)):
                f = pos[:k] + pos[k + 1:]
                if f and births[f] > births[pos]:
                    births[f] = births[pos]
    return NerveComplex(FilteredComplex(births, _trusted=True), cover, inter, strategy)


@dataclass(frozen=True)
class AcyclicityReport:
    """Per-intersection ``(ε_I, a_I)`` and the overall ε of the cover."""

    per_simplex: dict
    eps: Fraction | float
    D: int
    delta: int

    @property
    def Q(self) -> int:
        return min(self.D, self.delta)

    def worst(self) -> list[tuple[int, ...]]:
        return sorted(s for s, (e, _a, _r) in self.per_simplex.items() if e == self.eps)

    def to_json(self, labels=None) -> dict:
        rows = []
        for s in sorted(self.per_simplex, key=lambda s: (len(s), s)):
            e, a, reason = self.per_simplex[s]
            rows.append({
                "simplex": list(labels(s) if labels else s),
                "eps2": doubled(e),
                "a": a,
                "reason": reason,
            })
        return {
            "eps2": doubled(self.eps),
            "units": "half-grid-steps",
            "D": self.D,
            "Delta": self.delta,
            "Q": self.Q,
            "intersections": rows,
        }


def acyclicity(cover: FilteredCover, max_card: int | float = math.inf, field: int = 2) -> AcyclicityReport:
    """Measure ε-acyclicity: ``ε_I`` is the distance of ``H_*(U_I)`` to the nearest point module.

    Every nonempty intersection is examined unless ``max_card`` caps ``|I|``.
    """
    nv = nerve(cover, max_card)
    per = {}
    eps: Fraction | float = Fraction(0)
    for pos, u in nv.intersections.items():
        e, a, reason = point_distance(barcode(u, max(u.dim, 0), field))
        per[pos] = (e, a, reason)
        if e > eps:
            eps = e
    return AcyclicityReport(per, eps if eps != INF else INF, nv.dim, cover.ambient.dim)
