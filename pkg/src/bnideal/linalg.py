"""Exact linear algebra over GF(p) (numpy, int64) and over QQ (Fractions)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

MAX_NUMPY_PRIME = 3_000_000_000  # keeps p^2 inside int64


def _as_array(rows: Sequence[Sequence[int]], p: int) -> np.ndarray:
    a = np.array(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(0 if a.size == 0 else 1, -1)
    return a % p


def rref_mod_p(rows, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p) and the pivot columns."""
    if p > MAX_NUMPY_PRIME:
        raise ValueError("prime too large for int64 elimination")
    a = _as_array(rows, p).copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank_mod_p(rows, p: int) -> int:
    if len(rows) == 0:
        return 0
    return len(rref_mod_p(rows, p)[1])


def nullspace_mod_p(rows, p: int, ncols: int | None = None) -> list[list[int]]:
    """Basis of ``{x : A x = 0}`` over GF(p)."""
    if len(rows) == 0:
        n = ncols or 0
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    r, pivots = rref_mod_p(rows, p)
    n = r.shape[1]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = int(-r[i, f]) % p
        basis.append(v)
    return basis


def rref_rational(rows) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return [], []
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a[:r], pivots


def rank(rows, p: int) -> int:
    if p:
        return rank_mod_p(rows, p)
    return len(rref_rational(rows)[1])


def independent_rows(rows, p: int) -> list[int]:
    """Indices of a greedy (first-come) maximal independent subset of ``rows``."""
    if not rows:
        return []
    cols = list(map(list, zip(*rows)))  # transpose: pivots of A^T pick rows of A
    if p:
        return rref_mod_p(cols, p)[1]
    return rref_rational(cols)[1]
