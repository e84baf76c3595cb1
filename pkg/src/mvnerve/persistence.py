"""Persistent homology over F_p.

Two independent routes to a barcode:

* :func:`barcode` / :func:`chain_barcode` run the column reduction on the
  filtered boundary matrix (compiled kernel when available).
* :func:`tower_homology` computes slice-wise homology with explicit cycle
  representatives and induced maps, and :func:`barcode_of_tower` decomposes
  the resulting tower from the ranks of its composite maps.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import linalg
from ._backend import reduce_columns
from .complex import FilteredComplex, faces

INF = math.inf


class PersistenceError(ValueError):
    pass


def check_field(p: int) -> int:
    if isinstance(p, bool) or int(p) != p or not linalg.is_prime(int(p)):
        raise PersistenceError(f"field characteristic must be prime, got {p!r}")
    return int(p)


class Interval(NamedTuple):
    """Half-open bar ``[birth, death)``; ``death`` is ``math.inf`` for essential classes."""

    birth: int
    death: int | float

    @property
    def essential(self) -> bool:
        return self.death == INF

    @property
    def length(self) -> int | float:
        return self.death - self.birth

    def shifted(self, k: int) -> "Interval":
        return Interval(self.birth + k, self.death + k)


def _interval(b, d) -> Interval:
    if d is None or d == "inf" or d == INF:
        return Interval(int(b), INF)
    b, d = int(b), int(d)
    if d <= b:
        raise PersistenceError(f"empty interval [{b}, {d})")
    return Interval(b, d)


class Barcode:
    """Per-degree multisets of bars, kept sorted by ``(birth, death)``."""

    __slots__ = ("_bars",)

    def __init__(self, bars: Mapping[int, Iterable] | None = None):
        out = {}
        for q, ivs in (bars or {}).items():
            lst = sorted(_interval(*iv) for iv in ivs)
            if lst:
                out[int(q)] = tuple(lst)
        self._bars = out

    def __getitem__(self, q: int) -> tuple[Interval, ...]:
        return self._bars.get(q, ())

    def degrees(self) -> list[int]:
        return sorted(self._bars)

    def max_degree(self) -> int:
        return max(self._bars, default=-1)

    def __eq__(self, other) -> bool:
        return isinstance(other, Barcode) and self._bars == other._bars

    def __hash__(self):
        return hash(tuple(sorted(self._bars.items())))

    def __repr__(self) -> str:
        inner = ", ".join(f"{q}: {[_fmt(iv) for iv in ivs]}" for q, ivs in sorted(self._bars.items()))
        return "Barcode({" + inner + "})"

    def __bool__(self) -> bool:
        return bool(self._bars)

    def truncate(self, max_degree: int) -> "Barcode":
        return Barcode({q: v for q, v in self._bars.items() if q <= max_degree})

    def shifted(self, k: int) -> "Barcode":
        return Barcode({q: [iv.shifted(k) for iv in v] for q, v in self._bars.items()})

    def union(self, other: "Barcode") -> "Barcode":
        qs = set(self._bars) | set(other._bars)
        return Barcode({q: list(self[q]) + list(other[q]) for q in qs})

    def to_json(self) -> dict:
        return {str(q): [[iv.birth, "inf" if iv.essential else iv.death] for iv in ivs] for q, ivs in sorted(self._bars.items())}

    @classmethod
    def from_json(cls, data: Mapping) -> "Barcode":
        return cls({int(q): [tuple(iv) for iv in ivs] for q, ivs in data.items()})

    def to_text(self) -> str:
        lines = []
        for q, ivs in sorted(self._bars.items()):
            for iv in ivs:
                lines.append(f"{q} {iv.birth} {'inf' if iv.essential else iv.death}")
        return "\n".join(lines) + ("\n" if lines else "")

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def dims_at(self, j: int) -> dict[int, int]:
        return {q: sum(1 for iv in ivs if iv.birth <= j < iv.death) for q, ivs in self._bars.items()}


def _fmt(iv: Interval) -> str:
    return f"[{iv.birth},{'inf' if iv.essential else iv.death})"


# ---------------------------------------------------------------------------
# filtered chain complexes


class FilteredChainComplex:
    """Chain complex of free F_p-modules with a birth per generator.

    Generators are stored in filtration order ``(birth, degree, input order)``
    so every boundary entry refers to an earlier generator.
    """

    def __init__(
        self,
        generators: Sequence[tuple[Hashable, int, int]],
        boundary: Mapping[Hashable, Mapping[Hashable, int]],
        p: int = 2,
    ):
        self.p = check_field(p)
        order = sorted(range(len(generators)), key=lambda k: (generators[k][2], generators[k][1], k))
        self.keys = [generators[k][0] for k in order]
        self.index = {key: i for i, key in enumerate(self.keys)}
        if len(self.index) != len(self.keys):
            raise PersistenceError("duplicate generator key")
        self.degrees = np.array([generators[k][1] for k in order], dtype=np.int64)
        self.births = np.array([generators[k][2] for k in order], dtype=np.int64)
        self.columns: list[dict[int, int]] = []
        for i, key in enumerate(self.keys):
            col = {}
            for fkey, c in boundary.get(key, {}).items():
                j = self.index.get(fkey)
                if j is None:
                    raise PersistenceError(f"boundary of {key!r} refers to unknown generator {fkey!r}")
                if self.degrees[j] != self.degrees[i] - 1:
                    raise PersistenceError(f"boundary of {key!r} has entry {fkey!r} in the wrong degree")
                if self.births[j] > self.births[i]:
                    raise PersistenceError(f"boundary of {key!r} contains {fkey!r}, born later")
                v = (col.get(j, 0) + c) % self.p
                if v:
                    col[j] = v
                else:
                    col.pop(j, None)
            self.columns.append(col)
        self._by_degree = {}
        for q in set(self.degrees.tolist()):
            self._by_degree[q] = np.flatnonzero(self.degrees == q)

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if len(self.keys) else -1

    def generators(self, q: int) -> np.ndarray:
        """Global indices of degree-``q`` generators; births are nondecreasing along it."""
        return self._by_degree.get(q, np.zeros(0, dtype=np.int64))

    def local_index(self, q: int) -> dict[int, int]:
        return {int(g): k for k, g in enumerate(self.generators(q))}

    def alive(self, q: int, j) -> int:
        """Number of degree-``q`` generators born at or before ``j`` (a prefix)."""
        g = self.generators(q)
        if j == INF:
            return len(g)
        return int(np.searchsorted(self.births[g], j, side="right"))

    def boundary_matrix(self, q: int) -> np.ndarray:
        """Dense matrix of the boundary from degree ``q`` to ``q - 1`` in local indices."""
        rows = self.local_index(q - 1)
        cols = self.generators(q)
        m = linalg.zeros(len(rows), len(cols))
        for c, g in enumerate(cols):
            for r, v in self.columns[g].items():
                m[rows[r], c] = v
        return m

    def critical_values(self, degrees: Iterable[int] | None = None) -> list[int]:
        if degrees is None:
            return sorted(set(self.births.tolist()))
        vals = set()
        for q in degrees:
            vals.update(self.births[self.generators(q)].tolist())
        return sorted(vals)

    def check_square_zero(self) -> bool:
        for q in range(1, self.max_degree):
            a = self.boundary_matrix(q)
            b = self.boundary_matrix(q + 1)
            if a.size and b.size and np.any(linalg.matmul(a, b, self.p)):
                return False
        return True

    @classmethod
    def from_complex(cls, cx: FilteredComplex, p: int = 2, max_dim: int | None = None) -> "FilteredChainComplex":
        gens = []
        bnd = {}
        for s in cx.simplices():
            d = len(s) - 1
            if max_dim is not None and d > max_dim:
                continue
            gens.append((s, d, cx.births[s]))
            bnd[s] = {f: (-1) ** k for k, f in enumerate(faces(s))}
        return cls(gens, bnd, p)


def chain_barcode(fcc: FilteredChainComplex, max_degree: int | None = None, clearing: bool = True) -> Barcode:
    """Barcode of a filtered chain complex by column reduction."""
    n = len(fcc)
    if max_degree is None:
        max_degree = fcc.max_degree
    if n == 0:
        return Barcode()
    rows = [np.fromiter(col.keys(), dtype=np.int64, count=len(col)) for col in fcc.columns]
    coeffs = [np.fromiter(col.values(), dtype=np.int64, count=len(col)) for col in fcc.columns]
    low = reduce_columns(rows, coeffs, fcc.degrees, fcc.p, clearing)
    bars: dict[int, list] = {}
    paired = set()
    for c in range(n):
        r = int(low[c])
        if r < 0:
            continue
        paired.add(r)
        q = int(fcc.degrees[r])
        b, d = int(fcc.births[r]), int(fcc.births[c])
        if d > b and q <= max_degree:
            bars.setdefault(q, []).append((b, d))
    for c in range(n):
        if low[c] < 0 and c not in paired:
            q = int(fcc.degrees[c])
            if q <= max_degree:
                bars.setdefault(q, []).append((int(fcc.births[c]), INF))
    return Barcode(bars)


def barcode(cx: FilteredComplex, max_degree: int | None = None, field: int = 2) -> Barcode:
    """Persistence barcode of the sublevel filtration of ``cx`` in degrees ``0..max_degree``."""
    p = check_field(field)
    if max_degree is None:
        max_degree = max(cx.dim, 0)
    if max_degree < 0:
        raise PersistenceError("max_degree must be >= 0")
    fcc = FilteredChainComplex.from_complex(cx, p, max_dim=max_degree + 1)
    return chain_barcode(fcc, max_degree)


# ---------------------------------------------------------------------------
# towers


@dataclass(frozen=True)
class PersistenceTower:
    """Finite description of a Z-graded k[t]-module.

    The module is ``V_i`` on ``[grid[i], grid[i+1])``, zero below ``grid[0]``
    and ``V_last`` from ``grid[-1]`` on (``stable``) or zero from
    ``grid[-1] + 1`` on (not ``stable``). ``maps[i]`` is the structure map
    ``V_i -> V_{i+1}``, a ``dims[i+1] x dims[i]`` matrix. ``bases`` optionally
    records, per grid point, representatives of the basis vectors (columns).
    """

    grid: tuple[int, ...]
    dims: tuple[int, ...]
    maps: tuple[np.ndarray, ...]
    p: int = 2
    stable: bool = True
    bases: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        grid = tuple(int(g) for g in self.grid)
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "dims", dims)
        if len(grid) != len(dims) or len(self.maps) != max(len(grid) - 1, 0):
            raise PersistenceError("grid, dims and maps have inconsistent lengths")
        maps = []
        for i, m in enumerate(self.maps):
            m = np.asarray(m, dtype=np.int64)
            if m.size == 0 and dims[i] * dims[i + 1] == 0:
                m = m.reshape(dims[i + 1], dims[i])
            maps.append(linalg.as_mod(m, self.p))
        maps = tuple(maps)
        object.__setattr__(self, "maps", maps)
        if any(a >= b for a, b in zip(grid, grid[1:])):
            raise PersistenceError("grid must be strictly increasing")
        for i, m in enumerate(maps):
            if m.shape != (dims[i + 1], dims[i]):
                raise PersistenceError(f"map {i} has shape {m.shape}, expected {(dims[i + 1], dims[i])}")

    @classmethod
    def from_window(cls, j_min: int, dims: Sequence[int], maps: Sequence, p: int = 2, stable: bool = True):
        return cls(tuple(range(j_min, j_min + len(dims))), tuple(dims), tuple(np.asarray(m, dtype=np.int64) for m in maps), p, stable)

    @classmethod
    def zero(cls, p: int = 2) -> "PersistenceTower":
        return cls((0,), (0,), (), p)

    @property
    def window(self) -> tuple[int, int]:
        return self.grid[0], self.grid[-1]

    def index_at(self, j) -> int | None:
        """Grid position governing degree ``j``; ``None`` where the module is zero."""
        if not self.grid or j < self.grid[0]:
            return None
        if not self.stable and j > self.grid[-1]:
            return None
        return int(np.searchsorted(self.grid, j, side="right")) - 1

    def dim_at(self, j) -> int:
        i = self.index_at(j)
        return 0 if i is None else self.dims[i]

    def composite(self, i: int, k: int) -> np.ndarray:
        """Structure map ``V_i -> V_k`` for grid positions ``i <= k``."""
        m = linalg.identity(self.dims[i])
        for s in range(i, k):
            m = linalg.matmul(self.maps[s], m, self.p)
        return m

    def map_between(self, j1: int, j2: int) -> np.ndarray:
        """Multiplication by ``t^(j2 - j1)`` from degree ``j1`` to ``j2``."""
        i, k = self.index_at(j1), self.index_at(j2)
        if i is None or k is None:
            return linalg.zeros(self.dim_at(j2), self.dim_at(j1))
        return self.composite(i, k)

    def refine(self, grid: Sequence[int]) -> "PersistenceTower":
        """Same module on a finer grid (must contain the current one)."""
        grid = tuple(sorted(set(int(g) for g in grid)))
        if not set(self.grid) <= set(grid):
            raise PersistenceError("refinement grid must contain the current grid")
        if not self.stable:
            tail = self.grid[-1] + 1
            if tail not in grid and grid[-1] > self.grid[-1]:
                grid = tuple(sorted(set(grid) | {tail}))
        dims, bases = [], []
        for g in grid:
            dims.append(self.dim_at(g))
        maps = []
        for a, b in zip(grid, grid[1:]):
            maps.append(self.map_between(a, b))
        stable = self.stable or grid[-1] > self.grid[-1]
        new_bases = None
        if self.bases is not None:
            new_bases = tuple(self.bases[self.index_at(g)] if self.index_at(g) is not None else None for g in grid)
        return PersistenceTower(grid, tuple(dims), tuple(maps), self.p, stable, new_bases)


def barcode_of_tower(tower: PersistenceTower) -> list[Interval]:
    """Interval decomposition of a tower from the ranks of its composite maps."""
    n = len(tower.grid)
    if n == 0:
        return []
    r = {}
    for i in range(n):
        m = linalg.identity(tower.dims[i])
        r[i, i] = tower.dims[i]
        for k in range(i + 1, n):
            m = linalg.matmul(tower.maps[k - 1], m, tower.p)
            r[i, k] = linalg.rank(m, tower.p)

    def rk(i, k):
        if i < 0 or k >= n:
            return 0
        return r[i, k]

    bars = []
    for i in range(n):
        for k in range(i, n):
            if k == n - 1:
                mult = rk(i, k) - rk(i - 1, k)
                death = INF if tower.stable else tower.grid[-1] + 1
            else:
                mult = rk(i, k) - rk(i - 1, k) - rk(i, k + 1) + rk(i - 1, k + 1)
                death = tower.grid[k + 1]
            if mult < 0:
                raise PersistenceError("negative interval multiplicity; tower is inconsistent")
            bars.extend([Interval(tower.grid[i], death)] * mult)
    return sorted(bars)


def tower_homology(fcc: FilteredChainComplex, q: int, grid: Sequence[int] | None = None) -> PersistenceTower:
    """Degree-``q`` homology, slice by slice, with cycle representatives and induced maps.

    Representatives are columns over all degree-``q`` generators of ``fcc``.
    """
    p = fcc.p
    if grid is None:
        grid = fcc.critical_values([q, q + 1]) or [0]
    grid = list(grid)
    d_q = fcc.boundary_matrix(q)           # (n_{q-1}, n_q)
    d_q1 = fcc.boundary_matrix(q + 1)      # (n_q, n_{q+1})
    n_q = len(fcc.generators(q))
    dims, bases, solvers = [], [], []
    for j in grid:
        a_q = fcc.alive(q, j)
        a_q1 = fcc.alive(q + 1, j)
        a_qm = fcc.alive(q - 1, j) if q > 0 else 0
        z = linalg.nullspace(d_q[:a_qm, :a_q], p) if q > 0 else linalg.identity(a_q)
        if z.shape[0] != a_q:
            z = linalg.identity(a_q) if a_qm == 0 else z
        b = linalg.column_basis(d_q1[:a_q, :a_q1], p)
        h = linalg.extend_basis(b, z, p)
        rep = linalg.zeros(n_q, h.shape[1])
        rep[:a_q] = h
        dims.append(h.shape[1])
        bases.append(rep)
        solvers.append((a_q, linalg.Solver(np.concatenate([h, b], axis=1), p)))
    maps = []
    for i in range(len(grid) - 1):
        a_next, solver = solvers[i + 1]
        y = bases[i][:a_next]
        coords = solver.solve(y)
        maps.append(coords[: dims[i + 1]])
    return PersistenceTower(tuple(grid), tuple(dims), tuple(maps), p, True, tuple(bases))
