"""Exact linear algebra over the prime field F_p.

Matrices are dense numpy int64 arrays with entries reduced mod p.  The
systems that show up in this package stay small (a few hundred columns),
so straightforward Gaussian elimination is plenty.
"""

from __future__ import annotations

import numpy as np


def _inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def rref(a, p):
    """Reduced row echelon form of ``a`` mod p.

    Returns (R, pivots) where R contains only the nonzero rows and
    pivots[i] is the pivot column of row i.
    """
    a = np.array(a, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * _inv_mod(a[r, c], p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(a, p) -> int:
    r, _ = rref(a, p)
    return r.shape[0]


def nullspace(a, p):
    """Basis (rows) of {x : a @ x = 0 mod p}."""
    a = np.atleast_2d(np.asarray(a, dtype=np.int64))
    ncols = a.shape[1]
    r, pivots = rref(a, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-r[i, c]) % p
    return basis


def solve(a, b, p):
    """One solution x of a @ x = b mod p, or None if inconsistent."""
    a = np.atleast_2d(np.asarray(a, dtype=np.int64))
    b = np.asarray(b, dtype=np.int64) % p
    aug = np.concatenate([a % p, b.reshape(-1, 1)], axis=1)
    r, pivots = rref(aug, p)
    ncols = a.shape[1]
    if ncols in pivots:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r[i, ncols]
    return x


def in_row_space(basis, v, p) -> bool:
    """Is v in the row space of ``basis``?"""
    basis = np.atleast_2d(np.asarray(basis, dtype=np.int64))
    if basis.shape[0] == 0:
        return not np.any(np.asarray(v) % p)
    return solve(basis.T, v, p) is not None


class Span:
    """Incrementally maintained row space over F_p (rows kept in rref)."""

    def __init__(self, ncols: int, p: int):
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def reduce(self, v):
        v = np.asarray(v, dtype=np.int64) % self.p
        for i, c in enumerate(self.pivots):
            if v[c]:
                v = (v - v[c] * self.rows[i]) % self.p
        return v

    def contains(self, v) -> bool:
        return not np.any(self.reduce(v))

    def add(self, v) -> bool:
        """Add v to the span; returns True if the dimension grew."""
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = (v * _inv_mod(v[c], self.p)) % self.p
        # back-substitute into existing rows to keep rref shape
        if self.rows.shape[0]:
            col = self.rows[:, c].copy()
            self.rows = (self.rows - np.outer(col, v)) % self.p
        # insert keeping pivot columns sorted
        pos = int(np.searchsorted(np.array(self.pivots + [self.ncols]), c))
        self.rows = np.insert(self.rows, pos, v, axis=0)
        self.pivots.insert(pos, c)
        return True

    def basis(self):
        return self.rows.copy()

    def coords(self, v):
        """Coefficients expressing v over the basis rows, or None."""
        if self.rows.shape[0] == 0:
            return np.zeros(0, dtype=np.int64) if not np.any(np.asarray(v) % self.p) else None
        return solve(self.rows.T, v, self.p)
