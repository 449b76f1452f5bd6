"""The recursive factorization map, its kernel, and the distinguished component."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field as dc_field

from .algebra import (PLUS, Field, Polynomial, PolynomialRing, VariableName,
                      marginal_form, ring_for_table, table_indices)
from .bayes import Network
from .groebner import USE_DEFAULT, eliminate
from .ideals import Ideal, saturate
from .linalg import nullspace_mod_p, rank_mod_p

log = logging.getLogger(__name__)

MAX_ELIMINATION_VARS = 64


def _parent_levels(net: Network, j: int) -> list[tuple]:
    pa = sorted(net.parents(j))
    return list(itertools.product(*[range(1, net.levels[i - 1] + 1) for i in pa]))


def _restrict_index(u: tuple, nodes) -> tuple:
    return tuple(u[i - 1] for i in sorted(nodes))


@dataclass
class ParameterRing:
    """Parameters ``q^(j)_{u0, u_pa}`` of the conditional probability tables."""

    ring: PolynomialRing
    net: Network
    normalized: bool
    binary_shortcut: bool = False
    index: dict = dc_field(default_factory=dict)

    @classmethod
    def build(cls, net: Network, normalized: bool = True, binary_shortcut: bool = False,
              field: Field | None = None) -> "ParameterRing":
        if binary_shortcut and any(d != 2 for d in net.levels):
            raise ValueError("the binary shortcut needs every node binary")
        names = []
        for j in net.nodes:
            top = net.levels[j - 1] - (1 if normalized else 0)
            for w in _parent_levels(net, j):
                for u0 in range(1, top + 1):
                    names.append(VariableName("q", (j, u0) + w))
        ring = PolynomialRing(names, field or Field())
        return cls(ring, net, normalized, binary_shortcut, {v: i for i, v in enumerate(names)})

    def expected_count(self) -> int:
        total = 0
        for j in self.net.nodes:
            npa = 1
            for i in self.net.parents(j):
                npa *= self.net.levels[i - 1]
            total += (self.net.levels[j - 1] - (1 if self.normalized else 0)) * npa
        return total

    def q(self, j: int, u0: int, w: tuple) -> Polynomial:
        """The parameter for node j at level u0 given parent levels w (sum-to-one resolved)."""
        d = self.net.levels[j - 1]
        if self.normalized and u0 == d:
            out = self.ring.one()
            for v in range(1, d):
                out = out - self.ring.var(self.index[VariableName("q", (j, v) + w)])
            return out
        return self.ring.var(self.index[VariableName("q", (j, u0) + w)])


@dataclass
class FactorizationMap:
    """Images ``p_u -> prod_j q^(j)_{u_j, u_pa(j)}`` for every table index u."""

    net: Network
    table_ring: PolynomialRing
    params: ParameterRing
    images: dict

    @property
    def normalized(self) -> bool:
        return self.params.normalized

    def image(self, u: tuple) -> Polynomial:
        return self.images[tuple(u)]

    def total(self) -> Polynomial:
        out = self.params.ring.zero()
        for img in self.images.values():
            out = out + img
        return out

    def sums_to_one(self, samples: int = 100, seed: int = 0) -> bool:
        """Symbolic check for up to four nodes, evaluation at random points beyond."""
        if self.net.n <= 4:
            return self.total() == self.params.ring.one()
        rng = random.Random(seed)
        fld = self.params.ring.field
        imgs = list(self.images.values())
        for _ in range(samples):
            pt = [fld.random_element(rng) for _ in range(self.params.ring.nvars)]
            s = fld(0)
            for img in imgs:
                s = fld(s + img.evaluate(pt))
            if s != fld(1):
                return False
        return True

    def matrix(self, rows, cols) -> list[list[Polynomial]]:
        """Images arranged as a matrix, rows indexed by ``rows`` nodes and columns by ``cols``."""
        levels = self.net.levels
        rr = list(itertools.product(*[range(1, levels[i - 1] + 1) for i in rows]))
        cc = list(itertools.product(*[range(1, levels[i - 1] + 1) for i in cols]))
        out = []
        for a in rr:
            line = []
            for b in cc:
                u = [0] * self.net.n
                for i, x in zip(rows, a):
                    u[i - 1] = x
                for i, x in zip(cols, b):
                    u[i - 1] = x
                line.append(self.images[tuple(u)])
            out.append(line)
        return out


def build_phi(net: Network, normalized: bool = True, binary_shortcut: bool = False,
              field: Field | None = None) -> FactorizationMap:
    params = ParameterRing.build(net, normalized, binary_shortcut, field)
    table_ring = ring_for_table(net.levels, field=params.ring.field)
    images = {}
    for u in table_indices(net.levels):
        img = params.ring.one()
        for j in net.nodes:
            w = _restrict_index(u, net.parents(j))
            img = img * params.q(j, u[j - 1], w)
        images[u] = img
    return FactorizationMap(net, table_ring, params, images)


# ----------------------------------------------------------------------------
# homogeneous parametrization used for the kernel


def homogeneous_parametrization(net: Network, table_ring: PolynomialRing):
    """A homogeneous version of the normalized map.

    Every node with parents gets a scale ``aux[j]`` and free parameters for the
    levels 2..d_j; level 1 is ``aux[j]`` minus the others, so all columns of the
    conditional table share the column sum ``aux[j]``.  Root nodes keep all d_j
    parameters free.  Images are homogeneous of degree n and the image is the
    cone over the normalized model, so the kernel is the homogeneous prime.
    Returns ``(joint_ring, images)`` with parameters placed first in the joint ring.
    """
    names = []
    for j in net.nodes:
        d = net.levels[j - 1]
        if net.parents(j):
            names.append(VariableName("aux", (j,)))
            for w in _parent_levels(net, j):
                for u0 in range(2, d + 1):
                    names.append(VariableName("q", (j, u0) + w))
        else:
            for u0 in range(1, d + 1):
                names.append(VariableName("q", (j, u0)))
    k = len(names)
    joint = PolynomialRing(names + list(table_ring.variables), table_ring.field,
                           shape={"levels": table_ring.shape["levels"], "marginalized":
                                  table_ring.shape.get("marginalized", False)})
    idx = {v: i for i, v in enumerate(names)}

    def r(j, u0, w):
        if not net.parents(j):
            return joint.var(idx[VariableName("q", (j, u0))])
        if u0 >= 2:
            return joint.var(idx[VariableName("q", (j, u0) + w)])
        out = joint.var(idx[VariableName("aux", (j,))])
        for v in range(2, net.levels[j - 1] + 1):
            out = out - joint.var(idx[VariableName("q", (j, v) + w)])
        return out

    images = {}
    for u in table_indices(net.levels):
        img = joint.one()
        for j in net.nodes:
            img = img * r(j, u[j - 1], _restrict_index(u, net.parents(j)))
        images[u] = img
    return joint, k, images


def kernel_phi(net: Network, ring: PolynomialRing | None = None, field: Field | None = None,
               degree_cap: int | str | None = USE_DEFAULT,
               max_vars: int = MAX_ELIMINATION_VARS) -> Ideal:
    """The homogeneous prime ker(Phi), by eliminating the parameters from the graph ideal.

    ``ring`` may be the plain or the marginalized table ring; the result lives there.
    """
    ring = ring or ring_for_table(net.levels, field=field)
    plain = ring_for_table(net.levels, field=ring.field)
    joint, k, images = homogeneous_parametrization(net, plain)
    if joint.nvars > max_vars:
        raise ValueError(f"elimination needs {joint.nvars} variables (limit {max_vars}); "
                         "use the saturation route")
    gens = []
    for i, u in enumerate(table_indices(net.levels)):
        gens.append(joint.var(k + i) - images[u])
    elim = eliminate(gens, range(k), ring=joint, degree_cap=degree_cap)
    mapping = [None] * k + list(range(plain.nvars))
    out = [g.map_to(plain, mapping) for g in elim]
    if ring.shape.get("marginalized"):
        from .algebra import binomialize
        out = [binomialize(g) for g in out]
    elif ring is not plain:
        out = [g.map_to(ring, list(range(ring.nvars))) for g in out]
    return Ideal(ring, out)


# ----------------------------------------------------------------------------
# distinguished component by saturation


def saturation_forms(net: Network, ring: PolynomialRing, full: bool = False) -> list[Polynomial]:
    """Marginal linear forms whose product saturates a Markov ideal onto ker(Phi).

    The reduced set takes, for each node k < n, the forms with '+' in slots
    1..k, free levels on the parents of k and level 1 on the remaining slots.
    With ``full`` every form with '+' in slots 1..k and arbitrary levels after
    is used instead.
    """
    n = net.n
    forms = []
    seen = set()
    for k in range(1, n):
        pa = net.parents(k)
        slots = []
        for j in range(k + 1, n + 1):
            if full or j in pa:
                slots.append(range(1, net.levels[j - 1] + 1))
            else:
                slots.append((1,))
        for tail in itertools.product(*slots):
            pattern = [PLUS] * k + list(tail)
            f = marginal_form(ring, pattern)
            key = f.to_string()
            if key not in seen:
                seen.add(key)
                forms.append(f)
    return forms


def distinguished_component(I: Ideal, net: Network, full: bool = False) -> Ideal:
    """(I : p^inf) computed one marginal linear form at a time."""
    J = I
    for f in saturation_forms(net, I.ring, full=full):
        J = saturate(J, f)
    return J


# ----------------------------------------------------------------------------
# sampling


def _monomials_of_degree(nvars: int, d: int):
    return list(itertools.combinations_with_replacement(range(nvars), d))


def low_degree_kernel(net: Network, d: int, ring: PolynomialRing | None = None,
                      seed: int = 0, extra: int = 50, check: int = 25) -> list[Polynomial]:
    """Basis of the graded pieces of ker(Phi) in degrees 1..d, by interpolation at random points.

    The evaluation matrix has (monomial count + ``extra``) rows; rank stability is
    confirmed by ``check`` more rows.
    """
    if d < 2:
        raise ValueError("degree bound must be at least 2")
    ring = ring or ring_for_table(net.levels)
    p = ring.field.characteristic
    if not p:
        raise ValueError("sampling needs a prime field")
    plain = ring_for_table(net.levels, field=ring.field)
    joint, k, images = homogeneous_parametrization(net, plain)
    imgs = [images[u] for u in table_indices(net.levels)]
    rng = random.Random(seed)

    def sample(count):
        pts = []
        for _ in range(count):
            par = [rng.randrange(p) for _ in range(k)] + [0] * plain.nvars
            pts.append([int(f.evaluate(par)) % p for f in imgs])
        return pts

    out: list[Polynomial] = []
    nv = plain.nvars
    for deg in range(1, d + 1):
        monos = _monomials_of_degree(nv, deg)
        m = len(monos)
        pts = sample(m + extra + check)

        def rows(points):
            res = []
            for x in points:
                line = []
                for mono in monos:
                    v = 1
                    for i in mono:
                        v = v * x[i] % p
                    line.append(v)
                res.append(line)
            return res

        mat = rows(pts)
        r1 = rank_mod_p(mat[: m + extra], p)
        r2 = rank_mod_p(mat, p)
        if r1 != r2:
            raise RuntimeError("evaluation rank did not stabilise; increase the sample count")
        for vec in nullspace_mod_p(mat, p, ncols=m):
            data = {}
            for c, mono in zip(vec, monos):
                if c:
                    e = [0] * nv
                    for i in mono:
                        e[i] += 1
                    data[plain.pack(e)] = c
            out.append(Polynomial(plain, data))
    if ring.shape.get("marginalized"):
        from .algebra import binomialize
        out = [binomialize(g) for g in out]
    return out


def conjecture_quadrics_generate(net: Network, ring: PolynomialRing | None = None,
                                 seed: int = 0) -> bool:
    """Whether the quadrics of ker(Phi) generate it (tested, never assumed)."""
    ring = ring or ring_for_table(net.levels)
    quads = [g for g in low_degree_kernel(net, 2, ring, seed=seed) if g.total_degree() == 2]
    K = kernel_phi(net, ring)
    Q = Ideal(ring, quads)
    return all(Q.contains(g) for g in K.generators)
