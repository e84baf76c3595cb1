"""Mayer-Vietoris double complex, its total complex and spectral sequence.

Generators of the double complex are pairs ``(σ, I)`` with ``σ`` a simplex of
``U_I``; ``p = |I| - 1`` and ``q = dim σ``. The total differential is
``D = (-1)^p ∂⁰ + ∂¹`` and the column filtration ``F_p`` keeps the
generators with column index ``<= p``.

Everything below is computed slice by slice over the critical degrees of the
total complex; between two critical degrees nothing changes.

Pages. With ``Z^r_p = {x in F_p : Dx in F_{p-r}}`` the page is
``E^r_p = Z^r_p / (Z^{r-1}_{p-1} + D Z^{r-1}_{p+r-1})``. Page 1 is read off
this formula. Each later page is obtained as the homology of
``(E^r, d^r)``: kernel classes are lifted into ``Z^{r+1}`` by the usual
zig-zag and then reduced modulo the image of the incoming differential. The
formula is only used to cross-check dimensions and to build coordinate
solvers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .complex import FilteredComplex, FilteredCover, faces
from .modules import TowerMorphism
from .nerve import nonempty_intersections
from .persistence import Barcode, FilteredChainComplex, PersistenceTower, barcode_of_tower, chain_barcode, check_field


class SpectralError(RuntimeError):
    """Internal inconsistency while computing pages (indicates a bug, not bad input)."""


class DoubleComplex:
    """The Mayer-Vietoris double complex of a filtered cover."""

    def __init__(self, cover: FilteredCover, field: int = 2):
        self.cover = cover
        self.ambient = cover.ambient
        self.p = check_field(field)
        self.blocks: dict[tuple[int, ...], FilteredComplex] = dict(nonempty_intersections(cover))
        gens = []
        bnd = {}
        for I, u in self.blocks.items():
            pcol = len(I) - 1
            for s, b in u.births.items():
                gens.append(((s, I), pcol + len(s) - 1, b))
                col = {}
                sign0 = -1 if pcol % 2 else 1
                for k, f in enumerate(faces(s)):
                    col[(f, I)] = sign0 * (-1) ** k
                if pcol > 0:
                    for l in range(len(I)):
                        col[(s, I[:l] + I[l + 1:])] = (-1) ** l
                bnd[(s, I)] = col
        self.tot = FilteredChainComplex(gens, bnd, self.p)
        self.pdeg = np.array([len(I) - 1 for (_s, I) in self.tot.keys], dtype=np.int64)
        self.qdeg = np.array([len(s) - 1 for (s, _I) in self.tot.keys], dtype=np.int64)

    @property
    def nerve_dim(self) -> int:
        return max((len(I) - 1 for I in self.blocks), default=-1)

    @property
    def ambient_dim(self) -> int:
        return self.ambient.dim

    @property
    def infinity_page(self) -> int:
        """Page at which the sequence has stabilised: ``min(D, Δ) + 2``."""
        return max(min(self.nerve_dim, self.ambient_dim), 0) + 2

    def counts(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for pp, qq in zip(self.pdeg.tolist(), self.qdeg.tolist()):
            out[pp, qq] = out.get((pp, qq), 0) + 1
        return out

    def grid(self) -> list[int]:
        return self.tot.critical_values() or [0]

    def check(self) -> bool:
        """``D∘D = 0`` on the total complex."""
        return self.tot.check_square_zero()

    def __repr__(self):
        return f"DoubleComplex({len(self.blocks)} intersections, {len(self.tot)} generators)"


def build_double_complex(ambient: FilteredComplex, cover: FilteredCover, field: int = 2) -> DoubleComplex:
    if cover.ambient != ambient:
        raise ValueError("cover is not a cover of the given complex")
    return DoubleComplex(cover, field)


def total_barcode(dc: DoubleComplex, max_degree: int | None = None) -> Barcode:
    """Barcode of the filtered total complex; equals the barcode of the ambient complex."""
    if max_degree is None:
        max_degree = max(dc.ambient_dim, 0)
    return chain_barcode(dc.tot, max_degree)


# ---------------------------------------------------------------------------
# per-slice linear algebra


class _Slice:
    """Dense views of the total complex at one degree ``j`` of the persistence grading."""

    def __init__(self, dc: DoubleComplex, j):
        self.dc = dc
        self.fp = dc.p
        tot = dc.tot
        self.top = tot.max_degree
        self.alive = {n: tot.alive(n, j) for n in range(-1, self.top + 2)}
        self._col_p = {}
        for n in range(0, self.top + 1):
            g = tot.generators(n)[: self.alive[n]]
            self._col_p[n] = dc.pdeg[g]
        self._bd = {}
        self._z = {}

    def colp(self, n):
        return self._col_p.get(n, np.zeros(0, dtype=np.int64))

    def size(self, n):
        return self.alive.get(n, 0) if 0 <= n <= self.top else 0

    def bd(self, n) -> np.ndarray:
        """Boundary ``Tot_n -> Tot_{n-1}`` restricted to generators alive here."""
        if n not in self._bd:
            if n <= 0 or n > self.top:
                self._bd[n] = linalg.zeros(self.size(n - 1), self.size(n))
            else:
                full = self.dc_full_bd(n)
                self._bd[n] = full[: self.size(n - 1), : self.size(n)]
        return self._bd[n]

    def dc_full_bd(self, n):
        cache = self.dc.__dict__.setdefault("_full_bd", {})
        if n not in cache:
            cache[n] = self.dc.tot.boundary_matrix(n)
        return cache[n]

    def Z(self, r: int, pcol: int, n: int) -> np.ndarray:
        """Basis of ``Z^r_p`` in total degree ``n`` (columns in local coordinates)."""
        key = (r, pcol, n)
        if key not in self._z:
            size = self.size(n)
            cols = np.flatnonzero(self.colp(n) <= pcol) if size else np.zeros(0, dtype=np.int64)
            if len(cols) == 0:
                self._z[key] = linalg.zeros(size, 0)
            else:
                a = self.bd(n)
                rows = np.flatnonzero(self.colp(n - 1) > pcol - r) if self.size(n - 1) else np.zeros(0, dtype=np.int64)
                sub = a[np.ix_(rows, cols)]
                if sub.shape[0] == 0:
                    ker = linalg.identity(len(cols))
                else:
                    ker = linalg.nullspace(sub, self.fp)
                z = linalg.zeros(size, ker.shape[1])
                z[cols] = ker
                self._z[key] = z
        return self._z[key]

    def den_parts(self, r: int, pcol: int, n: int) -> tuple[np.ndarray, np.ndarray]:
        """``Z^{r-1}_{p-1}`` and ``Z^{r-1}_{p+r-1}`` (degree n+1), whose sum with ``D`` gives the denominator."""
        return self.Z(r - 1, pcol - 1, n), self.Z(r - 1, pcol + r - 1, n + 1)

    def den(self, r: int, pcol: int, n: int) -> np.ndarray:
        a, b = self.den_parts(r, pcol, n)
        gen = np.concatenate([a, linalg.matmul(self.bd(n + 1), b, self.fp)], axis=1)
        return linalg.column_basis(gen, self.fp)

    def cycles_in(self, pcol: int, n: int) -> np.ndarray:
        """Cycles of ``F_p`` in degree ``n``."""
        return self.Z(10 ** 6, pcol, n)

    def boundaries(self, n: int) -> np.ndarray:
        return linalg.column_basis(self.bd(n + 1), self.fp)


@dataclass
class _Cell:
    reps: np.ndarray       # local coords, one column per basis class
    solver: linalg.Solver  # over [reps | den]
    k: int


@dataclass
class SpectralPage:
    """Page ``E^r``: towers per cell ``(p, q)`` and the differentials ``d^r`` leaving each cell."""

    r: int
    cells: dict[tuple[int, int], PersistenceTower]
    differentials: dict[tuple[int, int], TowerMorphism] = field(default_factory=dict)
    collapsed: bool = False

    def barcode(self, pq: tuple[int, int]) -> list:
        t = self.cells.get(pq)
        return barcode_of_tower(t) if t is not None else []

    def barcodes(self) -> dict[tuple[int, int], list]:
        return {pq: bc for pq in sorted(self.cells) if (bc := self.barcode(pq))}

    def row(self, q: int) -> Barcode:
        """Row ``q`` as a graded barcode indexed by ``p``."""
        return Barcode({pp: self.barcode((pp, qq)) for (pp, qq) in self.cells if qq == q})

    def to_json(self) -> dict:
        cells = {}
        for (pp, qq), bars in self.barcodes().items():
            cells[f"{pp},{qq}"] = [[iv.birth, "inf" if iv.essential else iv.death] for iv in bars]
        return {"r": self.r, "cells": cells, "collapsed": self.collapsed}

    def render(self) -> str:
        """Text grid, ``q`` upward and ``p`` to the right, mirroring the usual page pictures."""
        bcs = self.barcodes()
        if not self.cells:
            return f"E^{self.r}: empty\n"
        pmax = max(pp for pp, _ in self.cells)
        qmax = max(qq for _, qq in self.cells)
        text = {}
        for pq, bars in bcs.items():
            text[pq] = " ".join(f"[{iv.birth},{'inf' if iv.essential else iv.death})" for iv in bars)
        width = max([len(t) for t in text.values()] + [1])
        lines = [f"E^{self.r}" + ("  (collapsed)" if self.collapsed else "")]
        for qq in range(qmax, -1, -1):
            cells = [text.get((pp, qq), ".").ljust(width) for pp in range(pmax + 1)]
            lines.append(f"q={qq} | " + " | ".join(cells))
        lines.append("      " + " | ".join(f"p={pp}".ljust(width) for pp in range(pmax + 1)))
        return "\n".join(lines) + "\n"


class SpectralSequence:
    """Lazily computed pages of the Mayer-Vietoris spectral sequence of ``dc``."""

    def __init__(self, dc: DoubleComplex, verify: bool = True):
        self.dc = dc
        self.verify = verify
        self.grid = dc.grid()
        self.slices = [_Slice(dc, j) for j in self.grid]
        self.pmax = max(dc.nerve_dim, 0)
        self.top = max(dc.tot.max_degree, 0)
        # per page: list over slices of {(p, n): _Cell}
        self._cells: dict[int, list[dict]] = {}
        self._dmats: dict[int, list[dict]] = {}
        self._pages: dict[int, SpectralPage] = {}

    def _keys(self):
        for pcol in range(0, self.pmax + 1):
            for n in range(pcol, self.top + 1):
                yield pcol, n

    def _make_cell(self, sl: _Slice, r: int, pcol: int, n: int, reps: np.ndarray) -> _Cell:
        den = sl.den(r, pcol, n)
        solver = linalg.Solver(np.concatenate([reps, den], axis=1), sl.fp)
        if self.verify:
            z = sl.Z(r, pcol, n)
            expected = linalg.rank(np.concatenate([den, z], axis=1), sl.fp) - den.shape[1]
            if reps.shape[1] != expected or solver.rank != reps.shape[1] + den.shape[1]:
                raise SpectralError(f"page {r} cell (p={pcol}, n={n}): basis has {reps.shape[1]} classes, expected {expected}")
            if reps.shape[1] and not np.all(linalg.Solver(z, sl.fp).contains(reps)):
                raise SpectralError(f"page {r} cell (p={pcol}, n={n}): representative outside Z^r")
        return _Cell(reps, solver, reps.shape[1])

    def _page1(self):
        out = []
        for sl in self.slices:
            cells = {}
            for pcol, n in self._keys():
                z = sl.Z(1, pcol, n)
                den = sl.den(1, pcol, n)
                reps = linalg.extend_basis(den, z, sl.fp)
                cells[pcol, n] = self._make_cell(sl, 1, pcol, n, reps)
            out.append(cells)
        return out

    def _differentials(self, r: int):
        """``d^r`` matrices per slice: ``(p, n) -> (p - r, n - 1)``."""
        mats = []
        for sl, cells in zip(self.slices, self._cells[r]):
            d = {}
            for (pcol, n), c in cells.items():
                tgt = cells.get((pcol - r, n - 1))
                if tgt is None:
                    d[pcol, n] = None
                    continue
                img = linalg.matmul(sl.bd(n), c.reps, sl.fp)
                d[pcol, n] = tgt.solver.solve(img)[: tgt.k]
            mats.append(d)
        return mats

    def _next(self, r: int):
        out = []
        for si, sl in enumerate(self.slices):
            cells = self._cells[r][si]
            dm = self._dmats[r][si]
            new = {}
            for (pcol, n), c in cells.items():
                dout = dm[pcol, n]
                kern = linalg.identity(c.k) if dout is None or dout.shape[0] == 0 else linalg.nullspace(dout, sl.fp)
                if kern.shape[0] != c.k:
                    kern = linalg.zeros(c.k, 0)
                din = dm.get((pcol + r, n + 1))
                img = din if din is not None else linalg.zeros(c.k, 0)
                img = linalg.column_basis(img, sl.fp)
                chosen = linalg.extend_basis(img, kern, sl.fp)
                x = linalg.matmul(c.reps, chosen, sl.fp)
                reps = self._lift(sl, r, pcol, n, x)
                new[pcol, n] = self._make_cell(sl, r + 1, pcol, n, reps)
            out.append(new)
        return out

    def _lift(self, sl: _Slice, r: int, pcol: int, n: int, x: np.ndarray) -> np.ndarray:
        """Replace each column ``x`` (with ``d^r[x] = 0``) by ``x - y`` in ``Z^{r+1}_p``.

        ``Dx = u + D y`` with ``u`` in ``Z^{r-1}_{p-r-1}`` and ``y`` in ``Z^{r-1}_{p-1}``.
        """
        if x.shape[1] == 0:
            return x
        fp = sl.fp
        u_basis = sl.Z(r - 1, pcol - r - 1, n - 1)
        y_basis = sl.Z(r - 1, pcol - 1, n)
        dy = linalg.matmul(sl.bd(n), y_basis, fp)
        solver = linalg.Solver(np.concatenate([u_basis, dy], axis=1), fp)
        try:
            coeff = solver.solve(linalg.matmul(sl.bd(n), x, fp))
        except ValueError:
            raise SpectralError(f"page {r}: kernel class at (p={pcol}, n={n}) does not lift") from None
        y = linalg.matmul(y_basis, coeff[u_basis.shape[1]:], fp)
        return (x - y) % fp

    def _ensure(self, r: int):
        if r < 1:
            raise ValueError("pages start at r = 1")
        if 1 not in self._cells:
            self._cells[1] = self._page1()
        cur = max(self._cells)
        while cur < r:
            if cur not in self._dmats:
                self._dmats[cur] = self._differentials(cur)
            self._cells[cur + 1] = self._next(cur)
            cur += 1
        if r not in self._dmats:
            self._dmats[r] = self._differentials(r)

    def _tower(self, r: int, key) -> PersistenceTower:
        pcol, n = key
        fp = self.dc.p
        size_total = len(self.dc.tot.generators(n))
        cells = [c[key] for c in self._cells[r]]
        maps = []
        for i in range(len(self.slices) - 1):
            nxt = cells[i + 1]
            size = self.slices[i + 1].size(n)
            y = linalg.zeros(size, cells[i].k)
            y[: cells[i].reps.shape[0]] = cells[i].reps
            maps.append(nxt.solver.solve(y)[: nxt.k])
        bases = []
        for c in cells:
            b = linalg.zeros(size_total, c.k)
            b[: c.reps.shape[0]] = c.reps
            bases.append(b)
        return PersistenceTower(tuple(self.grid), tuple(c.k for c in cells), tuple(maps), fp, True, tuple(bases))

    def page(self, r: int) -> SpectralPage:
        if r in self._pages:
            return self._pages[r]
        self._ensure(r)
        towers = {}
        for key in self._keys():
            pcol, n = key
            towers[pcol, n - pcol] = self._tower(r, key)
        diffs = {}
        collapsed = True
        for key in self._keys():
            pcol, n = key
            mats = [d[key] for d in self._dmats[r]]
            if mats[0] is None:
                continue
            tgt = towers[pcol - r, n - 1 - (pcol - r)]
            src = towers[pcol, n - pcol]
            diffs[pcol, n - pcol] = TowerMorphism(src, tgt, tuple(mats))
            if any(np.any(m) for m in mats):
                collapsed = False
        pg = SpectralPage(r, towers, diffs, collapsed)
        if self.verify:
            for (pcol, qq), dmor in diffs.items():
                nxt = diffs.get((pcol - r, qq + r - 1))
                if nxt is not None and not nxt.compose(dmor).is_zero():
                    raise SpectralError(f"d^{r} ∘ d^{r} != 0 at ({pcol}, {qq})")
        self._pages[r] = pg
        return pg


def spectral_sequence(dc: DoubleComplex) -> SpectralSequence:
    ss = dc.__dict__.get("_ss")
    if ss is None:
        ss = SpectralSequence(dc)
        dc._ss = ss
    return ss


def page(dc: DoubleComplex, r: int):
    """Page ``E^r``. ``r = 0`` returns the double complex itself."""
    if r == 0:
        return dc
    if r < 0:
        raise ValueError("page index must be >= 0")
    return spectral_sequence(dc).page(r)


def pages(dc: DoubleComplex, r_max: int | None = None) -> list[SpectralPage]:
    if r_max is None:
        r_max = dc.infinity_page
    return [page(dc, r) for r in range(1, r_max + 1)]


def infinity_page(dc: DoubleComplex) -> SpectralPage:
    return page(dc, dc.infinity_page)


def column_quotients(dc: DoubleComplex, n: int) -> list[PersistenceTower]:
    """Towers ``H_n(Tot)^p / H_n(Tot)^{p-1}`` for ``p = 0..n``, from the column filtration of total homology.

    ``H_n(Tot)^p`` is the image of ``H_n(F_p)`` in ``H_n(Tot)``, i.e.
    ``(Z(F_p) + B) / B``; the quotient is ``(Z(F_p) + B) / (Z(F_{p-1}) + B)``.
    """
    fp = dc.p
    grid = dc.grid()
    slices = [_Slice(dc, j) for j in grid]
    size_total = len(dc.tot.generators(n))
    out = []
    for pcol in range(0, n + 1):
        reps, solvers = [], []
        for sl in slices:
            b = sl.boundaries(n)
            lower = linalg.column_basis(np.concatenate([sl.cycles_in(pcol - 1, n), b], axis=1), fp)
            rep = linalg.extend_basis(lower, sl.cycles_in(pcol, n), fp)
            reps.append(rep)
            solvers.append(linalg.Solver(np.concatenate([rep, lower], axis=1), fp))
        maps = []
        for i in range(len(grid) - 1):
            y = linalg.zeros(slices[i + 1].size(n), reps[i].shape[1])
            y[: reps[i].shape[0]] = reps[i]
            maps.append(solvers[i + 1].solve(y)[: reps[i + 1].shape[1]])
        bases = []
        for rep in reps:
            bb = linalg.zeros(size_total, rep.shape[1])
            bb[: rep.shape[0]] = rep
            bases.append(bb)
        out.append(PersistenceTower(tuple(grid), tuple(r.shape[1] for r in reps), tuple(maps), fp, True, tuple(bases)))
    return out


def filtered_homology_dims(dc: DoubleComplex, n: int, pcol: int) -> list[int]:
    """``dim H_n(Tot)^p`` per grid point; ``p = -1`` gives zeros and ``p = n`` the full homology."""
    fp = dc.p
    out = []
    for j in dc.grid():
        sl = _Slice(dc, j)
        b = sl.boundaries(n)
        z = sl.cycles_in(pcol, n)
        out.append(linalg.rank(np.concatenate([z, b], axis=1), fp) - b.shape[1])
    return out


def bottom_row(pg: SpectralPage) -> Barcode:
    return pg.row(0)


def e1_expected(dc: DoubleComplex, max_degree: int | None = None) -> dict[tuple[int, int], list]:
    """Direct sums of the intersection barcodes, cell by cell."""
    from .persistence import barcode

    out: dict[tuple[int, int], list] = {}
    for I, u in dc.blocks.items():
        bc = barcode(u, max(u.dim, 0), dc.p)
        for q in bc.degrees():
            out.setdefault((len(I) - 1, q), []).extend(bc[q])
    return {k: sorted(v) for k, v in out.items()}


__all__ = [
    "DoubleComplex",
    "SpectralError",
    "SpectralPage",
    "SpectralSequence",
    "bottom_row",
    "build_double_complex",
    "column_quotients",
    "e1_expected",
    "filtered_homology_dims",
    "infinity_page",
    "page",
    "pages",
    "spectral_sequence",
    "total_barcode",
]
