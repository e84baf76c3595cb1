"""Dense linear algebra over the prime field F_p.

Matrices are ``int64`` numpy arrays with entries in ``[0, p)``. Vectors are
columns. Everything is exact; there is no floating point anywhere.
"""

from __future__ import annotations

import numpy as np

from ._backend import rref_inplace


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def as_mod(a, p: int) -> np.ndarray:
    return np.remainder(np.asarray(a, dtype=np.int64), p)


def zeros(m: int, n: int) -> np.ndarray:
    return np.zeros((m, n), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    if a.shape[1] * (p - 1) ** 2 < 2 ** 52:
        # exact in double precision, and BLAS is far faster than integer matmul
        c = a.astype(np.float64) @ b.astype(np.float64)
        return np.remainder(c, p).astype(np.int64)
    return (a @ b) % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    r = as_mod(a, p).copy()
    if r.size == 0:
        return r, []
    pivots = rref_inplace(r, p)
    return r, list(pivots)


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as columns) of ``{x : a x = 0}``."""
    m, n = a.shape
    if n == 0:
        return zeros(0, 0)
    r, piv = rref(a, p)
    pset = set(piv)
    free = [c for c in range(n) if c not in pset]
    basis = zeros(n, len(free))
    if free:
        basis[free, np.arange(len(free))] = 1
        if piv:
            basis[piv, :] = (-r[: len(piv)][:, free]) % p
    return basis


def column_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Independent subset of the columns of ``a`` spanning its column space."""
    if a.shape[1] == 0:
        return a.copy()
    _, piv = rref(a, p)
    return a[:, piv] % p


def extend_basis(base: np.ndarray, candidates: np.ndarray, p: int) -> np.ndarray:
    """Columns of ``candidates`` that extend the independent columns ``base``.

    Returns the selected candidate columns (a complement of span(base)
    inside span(base) + span(candidates)).
    """
    k = base.shape[1]
    joined = np.concatenate([base, candidates], axis=1) if k else candidates
    if joined.shape[1] == 0:
        return candidates[:, :0]
    _, piv = rref(joined, p)
    chosen = [c - k for c in piv if c >= k]
    return candidates[:, chosen] % p


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if n == 0:
        return zeros(0, 0)
    aug = np.concatenate([as_mod(a, p), identity(n)], axis=1)
    r, piv = rref(aug, p)
    if piv[:n] != list(range(n)):
        raise np.linalg.LinAlgError("matrix is singular mod p")
    return r[:, n:]


class Solver:
    """Solve ``a x = y`` for many right-hand sides ``y`` in the column space of ``a``.

    Elimination of ``[a | I]`` gives ``T a = E`` with ``E`` in reduced echelon
    form; a solution is read off ``T y`` at the pivot rows.
    """

    def __init__(self, a: np.ndarray, p: int):
        self.p = p
        self.shape = a.shape
        m, n = a.shape
        aug = np.concatenate([as_mod(a, p), identity(m)], axis=1)
        r, piv = rref(aug, p) if aug.size else (aug, [])
        self.pivots = [c for c in piv if c < n]
        self.rank = len(self.pivots)
        self._t = r[:, n:]

    def solve(self, y: np.ndarray, check: bool = True) -> np.ndarray:
        m, n = self.shape
        if y.ndim == 1:
            return self.solve(y[:, None], check)[:, 0]
        x = zeros(n, y.shape[1])
        if m == 0 or y.shape[1] == 0:
            return x
        ty = matmul(self._t, as_mod(y, self.p), self.p)
        if check and np.any(ty[self.rank:]):
            raise ValueError("right-hand side is not in the column space")
        x[self.pivots] = ty[: self.rank]
        return x

    def contains(self, y: np.ndarray) -> np.ndarray:
        """Boolean per column of ``y``: does it lie in the column space."""
        if y.ndim == 1:
            y = y[:, None]
        if self.shape[0] == 0:
            return np.ones(y.shape[1], dtype=bool)
        ty = matmul(self._t, as_mod(y, self.p), self.p)
        return ~np.any(ty[self.rank:], axis=0)
