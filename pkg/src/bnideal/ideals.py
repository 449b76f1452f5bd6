"""Ideals: membership, equality, quotients, saturation, intersection and trimming."""

from __future__ import annotations

import heapq
import logging
import threading
from typing import Iterable, Sequence

from . import cache as gbcache
from .algebra import (EXP_BITS, EXP_MASK, Polynomial, PolynomialRing, RingMismatchError,
                      VariableName, grevlex)
from .groebner import (USE_DEFAULT, DegreeBoundExceeded, GroebnerBasis,
                       NotHomogeneousError, eliminate, groebner_basis, hilbert, interreduce,
                       normal_form)
from .linalg import independent_rows

log = logging.getLogger(__name__)


class Ideal:
    """Generators in one ring plus lazily computed Groebner bases, one per order."""

    def __init__(self, ring: PolynomialRing, generators: Iterable[Polynomial] = ()):
        gens = []
        seen = set()
        for g in generators:
            if g.ring != ring:
                raise RingMismatchError("generator lives in another ring")
            if g:
                g = g.monic()
                if g not in seen:
                    seen.add(g)
                    gens.append(g)
        self.ring = ring
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._gb: dict[str, GroebnerBasis] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Ideal({len(self.generators)} generators in {self.ring!r})"

    def __add__(self, other):
        if isinstance(other, Ideal):
            other = other.generators
        return Ideal(self.ring, list(self.generators) + list(other))

    def __len__(self):
        return len(self.generators)

    # Groebner bases -------------------------------------------------------
    def gb(self, order=None, degree_cap: int | str | None = USE_DEFAULT) -> GroebnerBasis:
        order = order or self.ring.order
        desc = order.descriptor()
        with self._lock:
            hit = self._gb.get(desc)
            if hit is not None:
                return hit
            basis = gbcache.load(self.ring, self.generators, order)
            if basis is None:
                basis = groebner_basis(self.ring, self.generators, order, degree_cap=degree_cap)
                gbcache.store(basis, self.generators)
            self._gb[desc] = basis
            return basis

    def set_gb(self, basis: GroebnerBasis) -> None:
        self._gb[basis.order.descriptor()] = basis

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return self.gb().is_unit()

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def contains(self, f: Polynomial) -> bool:
        return contains(self, f)

    def __contains__(self, f):
        return contains(self, f)

    def issubset(self, other: "Ideal") -> bool:
        return all(contains(other, g) for g in self.generators)

    def hilbert(self):
        return hilbert(self.gb())

    def codim(self) -> int:
        return self.hilbert().codim

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "generators": [g.to_string() for g in self.generators]}

    @classmethod
    def from_json(cls, data: dict, ring: PolynomialRing | None = None) -> "Ideal":
        ring = ring or PolynomialRing.from_json(data["ring"])
        return cls(ring, [ring.parse(s) for s in data["generators"]])


def _same_ring(I: Ideal, J) -> None:
    ring = J.ring
    if ring != I.ring:
        raise RingMismatchError("objects live in different rings")


def contains(I: Ideal, f: Polynomial) -> bool:
    """Membership; any cached basis will do since the answer is order-independent."""
    _same_ring(I, f)
    if not f:
        return True
    basis = I._gb.get(I.ring.order.descriptor()) or next(iter(I._gb.values()), None)
    return not normal_form(f, basis or I.gb())


def equal(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    return I.issubset(J) and J.issubset(I)


# ----------------------------------------------------------------------------
# auxiliary-variable rings


def _extend(ring: PolynomialRing) -> tuple[PolynomialRing, list[int]]:
    """``ring`` with one fresh variable appended, plus the inclusion map."""
    k = 0
    while VariableName("t", (k,) if k else ()) in ring.index:
        k += 1
    var = VariableName("t", (k,) if k else ())
    ext = ring.shape.get("_ext")
    if ext is None:
        ext = ring.with_variables([var])
        ring.shape["_ext"] = ext
    return ext, list(range(ring.nvars))


def _restrict(ext: PolynomialRing, ring: PolynomialRing, polys: Iterable[Polynomial]):
    mapping = list(range(ring.nvars)) + [None]
    return [g.map_to(ring, mapping) for g in polys]


def _linear_coefficients(f: Polynomial) -> dict[int, object] | None:
    """Coefficients of a nonzero linear form, or None when f is not one."""
    out = {}
    for m, c in f.data.items():
        if m == 0 or f.ring.mono_degree(m) != 1:
            return None
        out[f.ring.support(m)[0]] = c
    return out or None


def _bayer_colon(I: Ideal, form: Polynomial, saturate: bool) -> Ideal:
    """(I : form) or (I : form^∞) for homogeneous I and a linear form.

    Changes coordinates so the form is a variable, ranks it last in grevlex, and
    divides basis elements by it (Bayer's criterion).
    """
    ring = I.ring
    coeffs = _linear_coefficients(form)
    x = max(coeffs)  # pivot: last ring variable in the form
    fld = ring.field
    cx = coeffs[x]
    if len(coeffs) == 1:
        pulled = I.generators
        push = None
    else:
        inv = fld.inv(cx)
        img = ring.var(x)
        for i, c in coeffs.items():
            if i != x:
                img = img - ring.var(i).scale(c)
        pull = {x: img.scale(inv)}
        pulled = [g.substitute(pull) for g in I.generators]
        push = {x: form}
    ranking = [i for i in range(ring.nvars) if i != x] + [x]
    order = grevlex(ring.nvars, ranking)
    if push is None:
        basis = I.gb(order)
    else:
        basis = groebner_basis(ring, pulled, order)
    sh = EXP_BITS * x
    xe = 1 << sh
    out = []
    for g in basis.generators:
        k = min((m >> sh) & EXP_MASK for m in g.data)
        if k:
            k = k if saturate else 1
            g = Polynomial(ring, {m - k * xe: c for m, c in g.data.items()})
        out.append(g)
    if push is not None:
        out = [g.substitute(push) for g in out]
        return Ideal(ring, out)
    # divided elements stay a Groebner basis for the same order
    J = Ideal(ring, out)
    J.set_gb(interreduce(ring, out, order))
    return J


def _exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact multivariate division ``f / g``; raises if g does not divide f."""
    ring = f.ring
    key = ring.order.key
    gl = g.leading_monomial()
    glc_inv = ring.field.inv(g.data[gl])
    gterms = [(m, c) for m, c in g.data.items() if m != gl]
    p = ring.field.characteristic
    rem = dict(f.data)
    heap = [(-key(m), m) for m in rem]
    heapq.heapify(heap)
    quo = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = rem.pop(m, 0)
        if not c:
            continue
        if not ring.divides(gl, m):
            raise ArithmeticError("division is not exact")
        q = c * glc_inv
        if p:
            q %= p
        qm = m - gl
        quo[qm] = q
        for gm, gc in gterms:
            k = gm + qm
            old = rem.get(k, 0)
            v = old - q * gc
            if p:
                v %= p
            if v:
                rem[k] = v
                if not old:
                    heapq.heappush(heap, (-key(k), k))
            else:
                rem.pop(k, None)
    return Polynomial(ring, quo)


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    return _exact_divide(f, g)


# ----------------------------------------------------------------------------
# colon ideals, saturation, intersection


def intersect(I: Ideal, J: Ideal, degree_cap: int | str | None = USE_DEFAULT) -> Ideal:
    """I ∩ J via ``t*I + (1-t)*J`` and elimination of t."""
    _same_ring(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring, [])
    ext, mapping = _extend(ring)
    t = ext.var(ring.nvars)
    gens = [t * g.map_to(ext, mapping) for g in I.generators]
    gens += [(1 - t) * g.map_to(ext, mapping) for g in J.generators]
    elim = eliminate(gens, [ring.nvars], ring=ext, degree_cap=degree_cap)
    return Ideal(ring, _restrict(ext, ring, elim))


def quotient(I: Ideal, f: Polynomial) -> Ideal:
    """(I : f) = {g : g f ∈ I}."""
    _same_ring(I, f)
    if not f:
        raise ValueError("quotient by zero")
    if f.is_constant():
        return I
    if I.is_homogeneous() and _linear_coefficients(f) is not None:
        return _bayer_colon(I, f, saturate=False)
    return quotient_by_intersection(I, f)


def quotient_by_intersection(I: Ideal, f: Polynomial) -> Ideal:
    inter = intersect(I, Ideal(I.ring, [f]))
    return Ideal(I.ring, [_exact_divide(g, f) for g in inter.generators])


def _variable_factors(f: Polynomial) -> list[int] | None:
    if len(f.data) != 1:
        return None
    (m,) = f.data
    out = []
    for i, e in enumerate(f.ring.unpack(m)):
        if e:
            out.append(i)
    return out


def saturate(I: Ideal, f: Polynomial, degree_cap: int | str | None = USE_DEFAULT) -> Ideal:
    """(I : f^∞).

    Linear forms acting on homogeneous ideals use Bayer's grevlex criterion;
    monomials saturate one variable at a time; anything else goes through the
    Rabinowitsch construction, falling back to iterated quotients when the
    extended basis exceeds the degree guardrail.
    """
    _same_ring(I, f)
    if not f:
        raise ValueError("saturation by zero")
    if f.is_constant() or I.is_zero():
        return I
    homog = I.is_homogeneous()
    if homog and _linear_coefficients(f) is not None:
        return _bayer_colon(I, f, saturate=True)
    vs = _variable_factors(f)
    if vs is not None and homog:
        J = I
        for v in vs:
            J = _bayer_colon(J, I.ring.var(v), saturate=True)
        return J
    try:
        return saturate_rabinowitsch(I, f, degree_cap)
    except DegreeBoundExceeded:
        log.info("Rabinowitsch saturation hit the degree cap; iterating quotients")
        return saturate_iterated(I, f)


def saturate_rabinowitsch(I: Ideal, f: Polynomial,
                          degree_cap: int | str | None = USE_DEFAULT) -> Ideal:
    ring = I.ring
    ext, mapping = _extend(ring)
    t = ext.var(ring.nvars)
    gens = [g.map_to(ext, mapping) for g in I.generators]
    gens.append(t * f.map_to(ext, mapping) - 1)
    elim = eliminate(gens, [ring.nvars], ring=ext, degree_cap=degree_cap)
    return Ideal(ring, _restrict(ext, ring, elim))


def saturate_iterated(I: Ideal, f: Polynomial, max_steps: int = 50) -> Ideal:
    cur = I
    for _ in range(max_steps):
        nxt = quotient(cur, f)
        if equal(nxt, cur):
            return cur
        cur = nxt
    raise RuntimeError("iterated quotient did not stabilise")


def saturate_many(I: Ideal, forms: Iterable[Polynomial]) -> Ideal:
    J = I
    for f in forms:
        J = saturate(J, f)
    return J


def is_regular(I: Ideal, f: Polynomial) -> bool:
    """Whether f is a nonzerodivisor modulo a homogeneous ideal I, by Hilbert series.

    For homogeneous f of degree d, HS(R/(I+f)) = (1 - t^d) HS(R/I) exactly when
    multiplication by f is injective on R/I.  Only default-order bases are
    needed, which are much cheaper than the reordered basis of a quotient.
    """
    _same_ring(I, f)
    if not I.is_homogeneous() or not f.is_homogeneous():
        raise NotHomogeneousError("the Hilbert criterion needs homogeneous input")
    if not f:
        return I.is_unit()
    d = f.total_degree()
    num = list(hilbert(I.gb()).numerator)
    want = num + [0] * d
    for i, c in enumerate(num):
        want[i + d] -= c
    while want and want[-1] == 0:
        want.pop()
    got = list(hilbert((I + [f]).gb()).numerator)
    while got and got[-1] == 0:
        got.pop()
    return got == want


def _numerator(J: Ideal) -> list:
    num = list(hilbert(J.gb()).numerator)
    while num and num[-1] == 0:
        num.pop()
    return num


def _sub(a: list, b: list) -> list:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    while out and out[-1] == 0:
        out.pop()
    return out


def colon_stable(I: Ideal, f: Polynomial) -> bool:
    """Whether (I : f^2) = (I : f) for homogeneous I and f, by Hilbert series.

    From 0 -> R/(I:g)(-deg g) -> R/I -> R/(I+g) -> 0 the numerator of I:g is
    (N(I) - N(I+g)) / t^deg g.  Since (I : f) is contained in (I : f^2), the two
    are equal exactly when their numerators agree.
    """
    _same_ring(I, f)
    if not I.is_homogeneous() or not f.is_homogeneous():
        raise NotHomogeneousError("the Hilbert criterion needs homogeneous input")
    d = f.total_degree()
    base = _numerator(I)
    once = [0] * d + _sub(base, _numerator(I + [f]))
    twice = _sub(base, _numerator(I + [f * f]))
    while once and once[-1] == 0:
        once.pop()
    return once == twice


def radical_membership(f: Polynomial, I: Ideal, max_power: int = 4) -> bool:
    """f ∈ √I.  Tries f^k ∈ I for small k, then Rabinowitsch: 1 ∈ I + <t f - 1>."""
    _same_ring(I, f)
    if not f:
        return True
    basis = I.gb()
    power = f
    for _ in range(max_power):
        if not normal_form(power, basis):
            return True
        power = power * f
    return rabinowitsch_membership(f, I)


def rabinowitsch_membership(f: Polynomial, I: Ideal) -> bool:
    ring = I.ring
    ext, mapping = _extend(ring)
    t = ext.var(ring.nvars)
    gens = [g.map_to(ext, mapping) for g in I.generators]
    gens.append(t * f.map_to(ext, mapping) - 1)
    basis = groebner_basis(ext, gens, degree_cap=None)
    return basis.is_unit()


# ----------------------------------------------------------------------------
# minimal generators


def _coefficient_rows(polys: Sequence[Polynomial]) -> list[list]:
    monos = sorted({m for f in polys for m in f.data})
    col = {m: i for i, m in enumerate(monos)}
    rows = []
    for f in polys:
        r = [0] * len(monos)
        for m, c in f.data.items():
            r[col[m]] = c
        rows.append(r)
    return rows


def linear_basis_subset(polys: Sequence[Polynomial]) -> list[Polynomial]:
    """A maximal linearly independent subset, chosen greedily in input order."""
    polys = [f for f in polys if f]
    if not polys:
        return []
    p = polys[0].ring.field.characteristic
    keep = independent_rows(_coefficient_rows(polys), p)
    return [polys[i] for i in keep]


def trim(I: Ideal) -> list[Polynomial]:
    """A minimal homogeneous generating set, built degree by degree."""
    if not I.is_homogeneous():
        raise NotHomogeneousError("trim needs a homogeneous ideal")
    gens = sorted(I.generators, key=lambda g: g.total_degree())
    by_deg: dict[int, list[Polynomial]] = {}
    for g in gens:
        by_deg.setdefault(g.total_degree(), []).append(g)
    kept: list[Polynomial] = []
    for d in sorted(by_deg):
        cand = by_deg[d]
        if kept:
            basis = groebner_basis(I.ring, kept, max_degree=d)
            reduced = [normal_form(g, basis) for g in cand]
        else:
            reduced = list(cand)
        pairs = [(g, r) for g, r in zip(cand, reduced) if r]
        if not pairs:
            continue
        p = I.ring.field.characteristic
        idx = independent_rows(_coefficient_rows([r for _, r in pairs]), p)
        kept.extend(pairs[i][0] for i in idx)
    return kept
