"""Algebra of towers (graded k[t]-modules) and distances between barcodes.

Distances and ε values are exact: integers or halves of integers, returned
as :class:`fractions.Fraction` (or ``math.inf``). Reports double them so the
emitted numbers are always integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import linalg
from .persistence import INF, Barcode, Interval, PersistenceTower, barcode_of_tower


class MorphismError(ValueError):
    pass


def doubled(x) -> int | str:
    """``2x`` as an int, or ``"inf"``."""
    if x == INF:
        return "inf"
    d = Fraction(x) * 2
    if d.denominator != 1:
        raise ValueError(f"{x} is not on the half-grid")
    return int(d)


# ---------------------------------------------------------------------------
# grids


def align(*towers: PersistenceTower) -> list[PersistenceTower]:
    """Refine towers onto one common grid (all end up stable)."""
    pts = set()
    for t in towers:
        pts.update(t.grid)
        if not t.stable:
            pts.add(t.grid[-1] + 1)
    grid = sorted(pts)
    out = []
    for t in towers:
        out.append(t if tuple(grid) == t.grid and t.stable else t.refine(grid))
    return out


@dataclass(frozen=True)
class TowerMorphism:
    """Degree-0 morphism of towers on a shared grid; ``components[i]`` is ``target_i x source_i``."""

    source: PersistenceTower
    target: PersistenceTower
    components: tuple[np.ndarray, ...]

    def __post_init__(self):
        s, t = self.source, self.target
        if s.grid != t.grid or s.stable != t.stable:
            raise MorphismError("source and target must share a grid; use align() first")
        if s.p != t.p:
            raise MorphismError("source and target are over different fields")
        comps = tuple(linalg.as_mod(np.asarray(c, dtype=np.int64).reshape(t.dims[i], s.dims[i]), s.p)
                      for i, c in enumerate(self.components))
        if len(comps) != len(s.grid):
            raise MorphismError("one component per grid point is required")
        object.__setattr__(self, "components", comps)
        bad = self.failing_square()
        if bad is not None:
            raise MorphismError(f"naturality fails on the square between degrees {s.grid[bad]} and {s.grid[bad + 1]}")

    @property
    def p(self) -> int:
        return self.source.p

    @property
    def grid(self) -> tuple[int, ...]:
        return self.source.grid

    def failing_square(self) -> int | None:
        s, t, p = self.source, self.target, self.source.p
        for i in range(len(s.grid) - 1):
            left = linalg.matmul(t.maps[i], self.components[i], p)
            right = linalg.matmul(self.components[i + 1], s.maps[i], p)
            if not np.array_equal(left, right):
                return i
        return None

    def is_zero(self) -> bool:
        return all(not np.any(c) for c in self.components)

    def compose(self, other: "TowerMorphism") -> "TowerMorphism":
        """``self ∘ other``."""
        if other.target.grid != self.source.grid or other.target.dims != self.source.dims:
            raise MorphismError("morphisms are not composable")
        comps = tuple(linalg.matmul(a, b, self.p) for a, b in zip(self.components, other.components))
        return TowerMorphism(other.source, self.target, comps)

    def __add__(self, other: "TowerMorphism") -> "TowerMorphism":
        return TowerMorphism(self.source, self.target, tuple((a + b) % self.p for a, b in zip(self.components, other.components)))

    def scaled(self, c: int) -> "TowerMorphism":
        return TowerMorphism(self.source, self.target, tuple((a * c) % self.p for a in self.components))

    def is_injective(self) -> bool:
        return all(linalg.rank(c, self.p) == c.shape[1] for c in self.components)

    def is_surjective(self) -> bool:
        return all(linalg.rank(c, self.p) == c.shape[0] for c in self.components)

    @classmethod
    def identity(cls, t: PersistenceTower) -> "TowerMorphism":
        return cls(t, t, tuple(linalg.identity(d) for d in t.dims))

    @classmethod
    def zero(cls, s: PersistenceTower, t: PersistenceTower) -> "TowerMorphism":
        return cls(s, t, tuple(linalg.zeros(t.dims[i], s.dims[i]) for i in range(len(s.grid))))


def morphism(source: PersistenceTower, target: PersistenceTower, components) -> TowerMorphism:
    return TowerMorphism(source, target, tuple(components))


# ---------------------------------------------------------------------------
# kernel / image / cokernel


def _subtower(grid, spaces, maps_amb, p, stable) -> PersistenceTower:
    """Tower of subspaces ``spaces[i]`` (independent columns) of an ambient tower."""
    dims = [s.shape[1] for s in spaces]
    maps = []
    for i in range(len(grid) - 1):
        y = linalg.matmul(maps_amb[i], spaces[i], p)
        maps.append(linalg.Solver(spaces[i + 1], p).solve(y))
    return PersistenceTower(grid, tuple(dims), tuple(maps), p, stable, tuple(spaces))


def kernel(f: TowerMorphism) -> PersistenceTower:
    p = f.p
    spaces = [linalg.nullspace(c, p) if c.shape[1] else linalg.zeros(0, 0) for c in f.components]
    spaces = [s if s.shape[0] == f.source.dims[i] else linalg.zeros(f.source.dims[i], 0) for i, s in enumerate(spaces)]
    return _subtower(f.grid, spaces, f.source.maps, p, f.source.stable)


def image(f: TowerMorphism) -> PersistenceTower:
    p = f.p
    spaces = [linalg.column_basis(c, p) for c in f.components]
    return _subtower(f.grid, spaces, f.target.maps, p, f.target.stable)


def cokernel(f: TowerMorphism) -> PersistenceTower:
    p = f.p
    t = f.target
    reps, solvers = [], []
    for i, c in enumerate(f.components):
        im = linalg.column_basis(c, p)
        rep = linalg.extend_basis(im, linalg.identity(t.dims[i]), p)
        reps.append(rep)
        solvers.append(linalg.Solver(np.concatenate([rep, im], axis=1), p))
    maps = []
    for i in range(len(t.grid) - 1):
        y = linalg.matmul(t.maps[i], reps[i], p)
        maps.append(solvers[i + 1].solve(y)[: reps[i + 1].shape[1]])
    return PersistenceTower(t.grid, tuple(r.shape[1] for r in reps), tuple(maps), p, t.stable, tuple(reps))


def kernel_inclusion(f: TowerMorphism) -> TowerMorphism:
    k = kernel(f)
    return TowerMorphism(k, f.source, k.bases)


def image_inclusion(f: TowerMorphism) -> TowerMorphism:
    im = image(f)
    return TowerMorphism(im, f.target, im.bases)


def cokernel_projection(f: TowerMorphism) -> TowerMorphism:
    c = cokernel(f)
    p = f.p
    comps = []
    for i, rep in enumerate(c.bases):
        im = linalg.column_basis(f.components[i], p)
        sol = linalg.Solver(np.concatenate([rep, im], axis=1), p)
        comps.append(sol.solve(linalg.identity(f.target.dims[i]))[: rep.shape[1]])
    return TowerMorphism(f.target, c, tuple(comps))


def corestrict_to_image(f: TowerMorphism) -> TowerMorphism:
    """``f`` viewed as a surjection onto its image."""
    im = image(f)
    comps = []
    for i, c in enumerate(f.components):
        comps.append(linalg.Solver(im.bases[i], f.p).solve(c))
    return TowerMorphism(f.source, im, tuple(comps))


# ---------------------------------------------------------------------------
# ε-triviality and shifts


def eps_trivial(x) -> Fraction | float:
    """Least ε in ½Z with ``t^(2ε) M = 0``; ``inf`` if ``M`` has an essential class.

    Accepts a tower or a list of intervals.
    """
    bars = barcode_of_tower(x) if isinstance(x, PersistenceTower) else list(x)
    if any(Interval(*iv).essential for iv in bars):
        return INF
    return Fraction(max((Interval(*iv).length for iv in bars), default=0), 2)


def is_eps_trivial(tower: PersistenceTower, eps) -> bool:
    """Direct check that multiplication by ``t^(2ε)`` vanishes on every slice."""
    if eps == INF:
        return True
    k = Fraction(eps) * 2
    if k.denominator != 1 or k < 0:
        raise ValueError("ε must be a nonnegative half-integer")
    k = int(k)
    for i, g in enumerate(tower.grid):
        if tower.dims[i] and np.any(tower.map_between(g, g + k)):
            return False
    return True


def shift(tower: PersistenceTower, eps: int) -> PersistenceTower:
    """``M(ε)``: degree ``j`` of the result is degree ``j + ε`` of ``M``; bars move by ``-ε``."""
    eps = int(eps)
    return PersistenceTower(tuple(g - eps for g in tower.grid), tower.dims, tower.maps, tower.p, tower.stable, tower.bases)


def tower_from_barcode(intervals: Iterable, p: int = 2) -> PersistenceTower:
    """Interval-decomposable tower; basis vector ``k`` at each grid point is the ``k``-th bar alive there."""
    bars = sorted(Interval(*iv) if not isinstance(iv, Interval) else iv for iv in intervals)
    pts = set()
    for b in bars:
        pts.add(b.birth)
        if not b.essential:
            pts.add(int(b.death))
    if not pts:
        return PersistenceTower.zero(p)
    grid = sorted(pts)
    alive = [[k for k, b in enumerate(bars) if b.birth <= g < b.death] for g in grid]
    maps = []
    for i in range(len(grid) - 1):
        m = linalg.zeros(len(alive[i + 1]), len(alive[i]))
        pos = {k: r for r, k in enumerate(alive[i + 1])}
        for c, k in enumerate(alive[i]):
            if k in pos:
                m[pos[k], c] = 1
        maps.append(m)
    return PersistenceTower(tuple(grid), tuple(len(a) for a in alive), tuple(maps), p, True)


# ---------------------------------------------------------------------------
# bottleneck distance


@dataclass(frozen=True)
class Matching:
    """Pairs ``(a, b)``; ``None`` on either side stands for the diagonal."""

    pairs: tuple[tuple[Interval | None, Interval | None], ...]
    cost: Fraction | float

    def to_json(self) -> list:
        def enc(iv):
            return None if iv is None else [iv.birth, "inf" if iv.essential else iv.death]

        return [[enc(a), enc(b)] for a, b in self.pairs]


def _pair_cost(a: Interval, b: Interval) -> Fraction:
    return Fraction(max(abs(a.birth - b.birth), abs(a.death - b.death)))


def _half(iv: Interval) -> Fraction:
    return Fraction(iv.death - iv.birth, 2)


def _feasible(fa, fb, t):
    n, m = len(fa), len(fb)
    rows, cols = [], []
    # left: fa (n) then diagonal copies of fb (m); right: fb (m) then diagonal copies of fa (n)
    for i, a in enumerate(fa):
        for k, b in enumerate(fb):
            if _pair_cost(a, b) <= t:
                rows.append(i)
                cols.append(k)
        if _half(a) <= t:
            rows.append(i)
            cols.append(m + i)
    for k, b in enumerate(fb):
        if _half(b) <= t:
            rows.append(n + k)
            cols.append(k)
        for i in range(n):
            rows.append(n + k)
            cols.append(m + i)
    size = n + m
    if size == 0:
        return True, np.zeros(0, dtype=np.int64)
    g = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(g, perm_type="column")
    return bool(np.all(match >= 0)), match


def bottleneck_matching(a: Iterable, b: Iterable) -> Matching:
    """Optimal matching between two single-degree barcodes."""
    a = sorted(Interval(*iv) for iv in a)
    b = sorted(Interval(*iv) for iv in b)
    ea = [iv for iv in a if iv.essential]
    eb = [iv for iv in b if iv.essential]
    if len(ea) != len(eb):
        return Matching((), INF)
    pairs = list(zip(ea, eb))
    ess = max((Fraction(abs(x.birth - y.birth)) for x, y in pairs), default=Fraction(0))
    fa = [iv for iv in a if not iv.essential]
    fb = [iv for iv in b if not iv.essential]
    cands = {ess}
    cands.update(_pair_cost(x, y) for x in fa for y in fb)
    cands.update(_half(x) for x in fa)
    cands.update(_half(y) for y in fb)
    cands = sorted(c for c in cands if c >= ess)
    lo, hi = 0, len(cands) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        ok, match = _feasible(fa, fb, cands[mid])
        if ok:
            best = (cands[mid], match)
            hi = mid - 1
        else:
            lo = mid + 1
    t, match = best
    n, m = len(fa), len(fb)
    for i in range(n):
        col = int(match[i])
        pairs.append((fa[i], fb[col]) if col < m else (fa[i], None))
    for k in range(m):
        col = int(match[n + k])
        if col < m:
            pairs.append((None, fb[col]))
    cost = max([ess] + [(_pair_cost(x, y) if x and y else _half(x or y)) for x, y in pairs])
    return Matching(tuple(pairs), cost)


def bottleneck(a: Iterable, b: Iterable) -> Fraction | float:
    return bottleneck_matching(a, b).cost


def barcode_distance(a: Barcode, b: Barcode, degrees: Iterable[int] | None = None) -> Fraction | float:
    """Graded distance: maximum of the per-degree bottleneck distances."""
    if degrees is None:
        degrees = set(a.degrees()) | set(b.degrees())
    return max((bottleneck(a[q], b[q]) for q in degrees), default=Fraction(0))


def distance_report(a: Iterable, b: Iterable) -> dict:
    m = bottleneck_matching(a, b)
    return {"distance": doubled(m.cost), "units": "half-grid-steps", "witness_matching": m.to_json()}


def point_distance(bc: Barcode) -> tuple[Fraction | float, int | None, str]:
    """Least ε with ``H_*`` ε-interleaved with ``H_*(pt_a)``, the optimal ``a`` and a reason string.

    The optimum is attained at the birth of the unique essential degree-0 class,
    so ``a`` is not searched over explicitly.
    """
    if not bc:
        return INF, None, "empty"
    ess0 = [iv for iv in bc[0] if iv.essential]
    if len(ess0) != 1:
        return INF, None, f"{len(ess0)} essential classes in degree 0"
    for q in bc.degrees():
        if q > 0 and any(iv.essential for iv in bc[q]):
            return INF, None, f"essential class in degree {q}"
    a = ess0[0].birth
    eps = bottleneck(bc[0], [Interval(a, INF)])
    for q in bc.degrees():
        if q > 0:
            eps = max(eps, bottleneck(bc[q], []))
    return eps, a, "ok"


# ---------------------------------------------------------------------------
# morphism spaces and witnesses


def hom_space(m: PersistenceTower, n: PersistenceTower) -> list[TowerMorphism]:
    """Basis of the degree-0 morphisms ``M -> N``, by solving the naturality equations."""
    m, n = align(m, n)
    p = m.p
    sizes = [n.dims[i] * m.dims[i] for i in range(len(m.grid))]
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    total = int(offs[-1])
    blocks = []
    for i in range(len(m.grid) - 1):
        a, b = n.dims[i + 1], m.dims[i]
        rows = linalg.zeros(a * b, total)
        # vec(N_i φ_i) - vec(φ_{i+1} M_i) = 0, column-major vec
        rows[:, offs[i]:offs[i + 1]] = np.kron(linalg.identity(m.dims[i]), n.maps[i])
        rows[:, offs[i + 1]:offs[i + 2]] = (-np.kron(m.maps[i].T, linalg.identity(n.dims[i + 1]))) % p
        blocks.append(rows)
    if total == 0:
        return []
    system = np.concatenate(blocks, axis=0) if blocks else linalg.zeros(0, total)
    basis = linalg.nullspace(system, p) if system.shape[0] else linalg.identity(total)
    out = []
    for k in range(basis.shape[1]):
        v = basis[:, k]
        comps = [v[offs[i]:offs[i + 1]].reshape(m.dims[i], n.dims[i]).T for i in range(len(m.grid))]
        out.append(TowerMorphism(m, n, tuple(comps)))
    return out


def random_morphism(m: PersistenceTower, n: PersistenceTower, rng) -> TowerMorphism:
    basis = hom_space(m, n)
    m2, n2 = align(m, n)
    f = TowerMorphism.zero(m2, n2)
    for g in basis:
        f = f + g.scaled(int(rng.integers(0, m.p)))
    return f


def is_short_exact(f: TowerMorphism, g: TowerMorphism) -> bool:
    """``0 -> A -f-> B -g-> C -> 0`` exact on every slice."""
    if f.target.dims != g.source.dims or f.grid != g.grid:
        return False
    if not (f.is_injective() and g.is_surjective()):
        return False
    p = f.p
    for a, b in zip(f.components, g.components):
        if np.any(linalg.matmul(b, a, p)):
            return False
        if linalg.rank(a, p) != b.shape[1] - linalg.rank(b, p):
            return False
    return True


def verify_left_interleaving(f: TowerMorphism, eps) -> bool:
    """Witness check: ``f`` is injective and its cokernel is ε-trivial."""
    return f.is_injective() and is_eps_trivial(cokernel(f), eps)


def verify_right_interleaving(f: TowerMorphism, eps) -> bool:
    """Witness check: ``f`` is surjective and its kernel is ε-trivial."""
    return f.is_surjective() and is_eps_trivial(kernel(f), eps)


def interval_distance(a: PersistenceTower, b: PersistenceTower) -> Fraction | float:
    return bottleneck(barcode_of_tower(a), barcode_of_tower(b))


__all__ = [
    "Matching",
    "MorphismError",
    "TowerMorphism",
    "align",
    "barcode_distance",
    "bottleneck",
    "bottleneck_matching",
    "cokernel",
    "cokernel_projection",
    "corestrict_to_image",
    "distance_report",
    "doubled",
    "eps_trivial",
    "hom_space",
    "image",
    "image_inclusion",
    "interval_distance",
    "is_eps_trivial",
    "is_short_exact",
    "kernel",
    "kernel_inclusion",
    "morphism",
    "point_distance",
    "random_morphism",
    "shift",
    "tower_from_barcode",
    "verify_left_interleaving",
    "verify_right_interleaving",
]
