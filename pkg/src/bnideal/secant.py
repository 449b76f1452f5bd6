"""Secant varieties of Segre products: dimensions, flattening minors, Strassen's equations."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import prod
from typing import Sequence

from .algebra import Field, Polynomial, PolynomialRing, VariableName, ring_for_table, table_indices
from .groebner import eliminate, hilbert
from .ideals import Ideal, exact_divide, trim
from .linalg import rank_mod_p

MAX_SECANT_TABLE = 16
MAX_SECANT_PARAMS = 24


@dataclass(frozen=True)
class SegreShape:
    levels: tuple
    r: int = 1

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(d) for d in self.levels))
        if len(self.levels) < 2 or any(d < 2 for d in self.levels) or self.r < 1:
            raise ValueError("need at least two factors, each of size >= 2, and r >= 1")

    @property
    def n(self) -> int:
        return len(self.levels)

    @property
    def ambient(self) -> int:
        """Projective dimension of the space of tables."""
        return prod(self.levels) - 1


def expected_dimension(shape: SegreShape) -> int:
    return min(shape.r * (sum(shape.levels) - shape.n + 1) - 1, shape.ambient)


def _rank_one_points(shape: SegreShape, rng: random.Random, p: int, r: int | None = None):
    r = shape.r if r is None else r
    return [[[rng.randrange(1, p) for _ in range(d)] for d in shape.levels] for _ in range(r)]


def _tensor(vectors, p: int) -> list[int]:
    out = [1]
    for v in vectors:
        out = [a * b % p for a in out for b in v]
    return out


def random_secant_point(shape: SegreShape, rng: random.Random, p: int, r: int | None = None) -> list[int]:
    """Coordinates (in table-index order) of a random sum of r rank-one tensors over GF(p)."""
    total = [0] * prod(shape.levels)
    for vecs in _rank_one_points(shape, rng, p, r):
        for i, x in enumerate(_tensor(vecs, p)):
            total[i] = (total[i] + x) % p
    return total


def terracini_dimension(shape: SegreShape, seed: int = 0, p: int = 32003, tries: int = 3) -> int:
    """Projective dimension of Sec^r from the rank of the parametrization's Jacobian."""
    best = -1
    for t in range(tries):
        rng = random.Random(seed * 1000 + t)
        rows = []
        for vecs in _rank_one_points(shape, rng, p):
            for i, d in enumerate(shape.levels):
                for k in range(d):
                    e = [0] * d
                    e[k] = 1
                    rows.append(_tensor(vecs[:i] + [e] + vecs[i + 1:], p))
        best = max(best, rank_mod_p(rows, p) - 1)
    return best


# ----------------------------------------------------------------------------
# flattenings


def flattenings(levels: Sequence[int]) -> list[tuple[tuple, tuple]]:
    """Bipartitions (S, complement) of the positions, each listed once (0 ∈ S)."""
    n = len(levels)
    out = []
    for k in range(1, n):
        for S in itertools.combinations(range(n), k):
            if 0 in S:
                out.append((S, tuple(i for i in range(n) if i not in S)))
    return out


def flattening_matrix(ring: PolynomialRing, levels: Sequence[int], S, T) -> list[list[Polynomial]]:
    rows = list(itertools.product(*[range(1, levels[i] + 1) for i in S]))
    cols = list(itertools.product(*[range(1, levels[i] + 1) for i in T]))
    mat = []
    for a in rows:
        line = []
        for b in cols:
            u = [0] * len(levels)
            for i, x in zip(S, a):
                u[i] = x
            for i, x in zip(T, b):
                u[i] = x
            line.append(ring.p(*u))
        mat.append(line)
    return mat


def det(mat: list[list[Polynomial]]) -> Polynomial:
    """Determinant by cofactor expansion (small matrices only)."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    out = None
    for j in range(n):
        if not mat[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * det(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out if out is not None else mat[0][0].ring.zero()


def minors(mat, k: int) -> list[Polynomial]:
    out = []
    for rs in itertools.combinations(range(len(mat)), k):
        for cs in itertools.combinations(range(len(mat[0])), k):
            m = det([[mat[i][j] for j in cs] for i in rs])
            if m:
                out.append(m)
    return out


def span_dimension(polys: Sequence[Polynomial]) -> int:
    if not polys:
        return 0
    monos = sorted({m for f in polys for m in f.data})
    col = {m: i for i, m in enumerate(monos)}
    rows = []
    for f in polys:
        r = [0] * len(monos)
        for m, c in f.data.items():
            r[col[m]] = c
        rows.append(r)
    p = polys[0].ring.field.characteristic
    from .linalg import rank
    return rank(rows, p)


@dataclass
class CubicReport:
    cubics: list
    span: int


def flattening_cubics(levels: Sequence[int], ring: PolynomialRing | None = None) -> CubicReport:
    """All 3x3 minors of all flattenings and the dimension of their span."""
    ring = ring or ring_for_table(levels)
    out = []
    for S, T in flattenings(levels):
        mat = flattening_matrix(ring, levels, S, T)
        if len(mat) >= 3 and len(mat[0]) >= 3:
            out.extend(minors(mat, 3))
    return CubicReport(out, span_dimension(out))


def flattening_determinants(levels: Sequence[int], size: int,
                            ring: PolynomialRing | None = None) -> list[Polynomial]:
    """Determinants of the square (size x size) flattenings."""
    ring = ring or ring_for_table(levels)
    out = []
    for S, T in flattenings(levels):
        mat = flattening_matrix(ring, levels, S, T)
        if len(mat) == size and len(mat[0]) == size:
            out.append(det(mat))
    return out


# ----------------------------------------------------------------------------
# the 3x3x3 case


def _slices(ring: PolynomialRing):
    return [[[ring.p(i, j, k) for j in (1, 2, 3)] for i in (1, 2, 3)] for k in (1, 2, 3)]


def adjugate(m):
    n = len(m)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
            c = det(minor)
            out[j][i] = c if (i + j) % 2 == 0 else -c
    return out


def matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(1, k)), a[i][0] * b[0][j]) for j in range(m)]
            for i in range(n)]


def _commutator(A, B, C):
    adjB = adjugate(B)
    X = matmul(matmul(A, adjB), C)
    Y = matmul(matmul(C, adjB), A)
    return [[X[i][j] - Y[i][j] for j in range(3)] for i in range(3)]


def strassen_quartics(ring: PolynomialRing | None = None) -> list[Polynomial]:
    """Entries of A adj(B) C - C adj(B) A for the three choices of the middle slice B."""
    ring = ring or ring_for_table((3, 3, 3))
    A, B, C = _slices(ring)
    out = []
    for a, b, c in ((A, B, C), (B, C, A), (C, A, B)):
        for row in _commutator(a, b, c):
            out.extend(f for f in row if f)
    return out


def degree9_invariant(ring: PolynomialRing | None = None) -> Polynomial:
    """det(A adj(B) C - C adj(B) A) / det(B), exact division asserted."""
    ring = ring or ring_for_table((3, 3, 3))
    A, B, C = _slices(ring)
    big = det(_commutator(A, B, C))
    return exact_divide(big, det(B))


# ----------------------------------------------------------------------------
# elimination


def secant_parametrization(shape: SegreShape, ring: PolynomialRing):
    """Joint ring (parameters first) and images of the p-variables.

    The first factor of each summand is kept free and the remaining factors
    are normalized to have first coordinate 1, which leaves the closure of the
    image unchanged.
    """
    names = []
    for s in range(shape.r):
        for i, d in enumerate(shape.levels):
            for k in range(1 if i else 0, d):
                names.append(VariableName("aux", (s + 1, i + 1, k + 1)))
    kpar = len(names)
    joint = PolynomialRing(names + list(ring.variables), ring.field,
                           shape={"levels": ring.shape["levels"], "marginalized": False})
    idx = {v: t for t, v in enumerate(names)}

    def coord(s, i, k):
        if i and k == 0:
            return joint.one()
        return joint.var(idx[VariableName("aux", (s + 1, i + 1, k + 1))])

    images = {}
    for u in table_indices(shape.levels):
        img = joint.zero()
        for s in range(shape.r):
            term = joint.one()
            for i, x in enumerate(u):
                term = term * coord(s, i, x - 1)
            img = img + term
        images[u] = img
    return joint, kpar, images


@dataclass
class SecantReport:
    ideal: Ideal
    codim: int
    degree: int
    mingens: int


def secant_ideal_small(shape: SegreShape, field: Field | None = None,
                       max_table: int = MAX_SECANT_TABLE,
                       max_params: int = MAX_SECANT_PARAMS) -> SecantReport:
    """The ideal of Sec^r by elimination, with its Hilbert data and minimal generator count."""
    ring = ring_for_table(shape.levels, field=field)
    if shape.n == 3 and shape.levels == (3, 3, 3) and shape.r >= 5:
        return SecantReport(Ideal(ring, []), 0, 1, 0)
    if expected_dimension(shape) >= shape.ambient and terracini_dimension(shape) >= shape.ambient:
        return SecantReport(Ideal(ring, []), 0, 1, 0)
    if prod(shape.levels) > max_table:
        raise ValueError(f"table has {prod(shape.levels)} entries (limit {max_table})")
    joint, kpar, images = secant_parametrization(shape, ring)
    if kpar > max_params:
        raise ValueError(f"{kpar} parameters (limit {max_params})")
    gens = [joint.var(kpar + t) - images[u] for t, u in enumerate(table_indices(shape.levels))]
    elim = eliminate(gens, range(kpar), ring=joint, degree_cap=None)
    mapping = [None] * kpar + list(range(ring.nvars))
    I = Ideal(ring, [g.map_to(ring, mapping) for g in elim])
    h = hilbert(I.gb())
    return SecantReport(I, h.codim, h.degree, len(trim(I)))
