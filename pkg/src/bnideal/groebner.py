"""Buchberger's algorithm, normal forms, elimination and Hilbert series."""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import (EXP_BITS, EXP_MASK, MonomialOrder, Polynomial, PolynomialRing,
                      RingMismatchError, block_order)

log = logging.getLogger(__name__)

DEFAULT_DEGREE_CAP = 20
USE_DEFAULT = "default"  # sentinel: resolve to the process-wide cap at call time
_default_cap: int | None = DEFAULT_DEGREE_CAP


def set_default_degree_cap(cap: int | None) -> None:
    """Change the guardrail used by every call that does not pass its own cap."""
    global _default_cap
    _default_cap = cap


class DegreeBoundExceeded(RuntimeError):
    """A Groebner basis element exceeded the configured degree guardrail.

    ``state`` holds the partial basis so a caller may resume with a larger cap.
    """

    def __init__(self, degree: int, cap: int, state=None):
        super().__init__(f"Groebner basis element of degree {degree} exceeds cap {cap}")
        self.degree = degree
        self.cap = cap
        self.state = state


class NotHomogeneousError(ValueError):
    pass


# ----------------------------------------------------------------------------
# internal representation: a polynomial is (head, tail); each term (key, exp, coeff)


def _internal(f: Polynomial, order: MonomialOrder):
    key = order.key
    terms = sorted(((key(m), m, c) for m, c in f.data.items()), reverse=True)
    return terms


def _make_monic(terms, p):
    lc = terms[0][2]
    if lc == 1:
        return terms
    inv = pow(lc, -1, p) if p else 1 / lc
    if p:
        return [(k, e, c * inv % p) for k, e, c in terms]
    return [(k, e, c * inv) for k, e, c in terms]


class _Reducer:
    """Basis under construction, with reduction against its leading monomials."""

    def __init__(self, ring: PolynomialRing, order: MonomialOrder):
        self.ring = ring
        self.order = order
        self.p = ring.field.characteristic
        self.guard = ring.guard
        self.polys: list[list] = []
        self.lms: list[int] = []

    def add(self, terms):
        self.polys.append(terms)
        self.lms.append(terms[0][1])
        return len(self.polys) - 1

    def find(self, e: int, last: bool = False):
        guard = self.guard
        lms = self.lms
        if last:
            for i in range(len(lms) - 1, -1, -1):
                if not (e - lms[i]) & guard:
                    return i
            return -1
        for i, lm in enumerate(lms):
            if not (e - lm) & guard:
                return i
        return -1

    def reduce(self, acc: dict, ex: dict, full: bool = True, last: bool = False):
        """Reduce the polynomial ``acc`` (key -> coeff; ``ex`` key -> exp) in place.

        Returns the remainder as a descending term list.
        """
        p = self.p
        polys = self.polys
        rem = []
        find = self.find
        while acc:
            k = max(acc)
            c = acc.pop(k)
            e = ex[k]
            i = find(e, last)
            if i < 0:
                rem.append((k, e, c))
                if not full:
                    rest = sorted(acc.items(), reverse=True)
                    rem.extend((kk, ex[kk], cc) for kk, cc in rest)
                    break
                continue
            g = polys[i]
            gk0, ge0, _ = g[0]
            dk = k - gk0
            de = e - ge0
            get = acc.get
            for j in range(1, len(g)):
                gk, ge, gc = g[j]
                kk = gk + dk
                v = get(kk)
                if v is None:
                    v = -c * gc
                    if p:
                        v %= p
                    acc[kk] = v
                    ex[kk] = ge + de
                else:
                    v = v - c * gc
                    if p:
                        v %= p
                    if v:
                        acc[kk] = v
                    else:
                        del acc[kk]
        return rem


def _degree(ring: PolynomialRing, e: int) -> int:
    return ring.mono_degree(e)


@dataclass
class GroebnerBasis:
    """Reduced, monic Groebner basis of an ideal under ``order``."""

    ring: PolynomialRing
    order: MonomialOrder
    generators: list[Polynomial]
    truncated_at: int | None = None
    _reducer: _Reducer | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._reducer is None:
            red = _Reducer(self.ring, self.order)
            for g in self.generators:
                red.add(_internal(g, self.order))
            self._reducer = red

    @property
    def initial_ideal(self) -> list[int]:
        return list(self._reducer.lms)

    def leading_monomials(self) -> list[int]:
        return list(self._reducer.lms)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def max_degree(self) -> int:
        return max((g.total_degree() for g in self.generators), default=0)

    def reduce(self, f: Polynomial, strategy: str = "first") -> Polynomial:
        return normal_form(f, self, strategy=strategy)

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce(f)

    def squarefree_initial(self) -> bool:
        ring = self.ring
        return all(all(e <= 1 for e in ring.unpack(m)) for m in self._reducer.lms)


def normal_form(f: Polynomial, basis: GroebnerBasis, strategy: str = "first") -> Polynomial:
    """Remainder of ``f`` on division by ``basis`` (fully reduced).

    ``strategy`` picks the first or the last admissible reducer; both give the
    same result because the basis is a Groebner basis.
    """
    if f.ring != basis.ring:
        raise RingMismatchError("polynomial and basis live in different rings")
    if not f:
        return f
    order = basis.order
    key = order.key
    acc = {}
    ex = {}
    for m, c in f.data.items():
        k = key(m)
        acc[k] = c
        ex[k] = m
    rem = basis._reducer.reduce(acc, ex, full=True, last=(strategy == "last"))
    return Polynomial(f.ring, {e: c for _, e, c in rem})


def interreduce(ring: PolynomialRing, polys: Iterable[Polynomial],
                order: MonomialOrder | None = None) -> GroebnerBasis:
    """The reduced basis from a set that is already a Groebner basis under ``order``."""
    order = order or ring.order
    gens = sorted((g.monic(order) for g in polys if g), key=lambda g: order.key(g.leading_monomial(order)))
    keep: list[Polynomial] = []
    lms: list[int] = []
    for g in gens:
        lm = g.leading_monomial(order)
        if not any(ring.divides(m, lm) for m in lms):
            keep.append(g)
            lms.append(lm)
    if any(g.is_constant() for g in keep):
        return GroebnerBasis(ring, order, [ring.one()])
    draft = GroebnerBasis(ring, order, keep)
    out = []
    for g in keep:
        lm = g.leading_monomial(order)
        tail = Polynomial(ring, {m: c for m, c in g.data.items() if m != lm})
        out.append(Polynomial(ring, {lm: g.data[lm]}) + normal_form(tail, draft))
    return GroebnerBasis(ring, order, out)


def _spoly(red: _Reducer, i: int, j: int, lcm_e: int, key):
    gi = red.polys[i]
    gj = red.polys[j]
    p = red.p
    acc: dict = {}
    ex: dict = {}
    ki, ei = key(lcm_e - gi[0][1]), lcm_e - gi[0][1]
    for t in range(1, len(gi)):
        k, e, c = gi[t]
        acc[k + ki] = c
        ex[k + ki] = e + ei
    kj, ej = key(lcm_e - gj[0][1]), lcm_e - gj[0][1]
    get = acc.get
    for t in range(1, len(gj)):
        k, e, c = gj[t]
        kk = k + kj
        v = get(kk)
        if v is None:
            acc[kk] = (-c) % p if p else -c
            ex[kk] = e + ej
        else:
            v = v - c
            if p:
                v %= p
            if v:
                acc[kk] = v
            else:
                del acc[kk]
    return acc, ex


def buchberger(gens: Iterable[Polynomial], order: MonomialOrder | None = None,
               degree_cap: int | str | None = USE_DEFAULT,
               max_degree: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Pairs are processed by increasing sugar, with Buchberger's coprime criterion
    and the Gebauer-Moeller chain criterion.  ``max_degree`` truncates the
    computation (a degree-truncated basis for homogeneous input);
    ``degree_cap`` is a guardrail raising :class:`DegreeBoundExceeded`.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("buchberger needs at least one polynomial (possibly 0) to know the ring")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError("generators live in different rings")
    gens = [g for g in gens if g]
    order = order or ring.order
    return _buchberger(ring, gens, order, degree_cap, max_degree)


def groebner_basis(ring: PolynomialRing, gens: Iterable[Polynomial],
                   order: MonomialOrder | None = None,
                   degree_cap: int | str | None = USE_DEFAULT,
                   max_degree: int | None = None) -> GroebnerBasis:
    """Like :func:`buchberger` but accepts an empty generator list."""
    gens = [g for g in gens if g]
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError("generators live in different rings")
    return _buchberger(ring, gens, order or ring.order, degree_cap, max_degree)


def _buchberger(ring, gens, order, degree_cap, max_degree) -> GroebnerBasis:
    if degree_cap == USE_DEFAULT:
        degree_cap = _default_cap
    p = ring.field.characteristic
    key = order.key
    lcm = ring.lcm
    guard = ring.guard
    mdeg = ring.mono_degree
    red = _Reducer(ring, order)
    if not gens:
        return GroebnerBasis(ring, order, [], max_degree, red)
    for g in gens:
        if g.is_constant():
            one = ring.one()
            return GroebnerBasis(ring, order, [one], max_degree)

    sugar: list[int] = []
    active: list[bool] = []
    queue: list = []
    counter = 0
    for g in gens:
        t = _internal(g, order)
        d = g.total_degree()
        heapq.heappush(queue, (d, t[0][0], counter, "poly", t))
        counter += 1
    pairs_alive: dict[int, tuple] = {}  # counter -> (i, j, lcm)

    def divides(a, b):
        return not ((b - a) & guard)

    def update(hi: int):
        nonlocal counter
        h = red.lms[hi]
        cand = []
        for i in range(len(red.lms)):
            if i == hi or not active[i]:
                continue
            cand.append((i, lcm(red.lms[i], h)))
        kept = []
        rest = list(cand)
        while rest:
            i, L = rest.pop(0)
            if L == red.lms[i] + h or not (any(divides(Lj, L) for _, Lj in rest)
                                           or any(divides(Lj, L) for _, Lj in kept)):
                kept.append((i, L))
        # chain criterion on old pairs
        dead = []
        for cid, (a, b, L) in pairs_alive.items():
            if divides(h, L) and lcm(red.lms[a], h) != L and lcm(red.lms[b], h) != L:
                dead.append(cid)
        for cid in dead:
            del pairs_alive[cid]
        for i, L in kept:
            if L == red.lms[i] + h:
                continue  # coprime leading monomials
            dL = mdeg(L)
            if max_degree is not None and dL > max_degree:
                continue
            s = max(sugar[i] + dL - mdeg(red.lms[i]), sugar[hi] + dL - mdeg(h))
            pairs_alive[counter] = (i, hi, L)
            heapq.heappush(queue, (s, key(L), counter, "pair", None))
            counter += 1
        for i in range(len(red.lms)):
            if i != hi and active[i] and divides(h, red.lms[i]):
                active[i] = False

    while queue:
        s, _, cid, kind, payload = heapq.heappop(queue)
        if kind == "pair":
            item = pairs_alive.pop(cid, None)
            if item is None:
                continue
            i, j, L = item
            acc, ex = _spoly(red, i, j, L, key)
        else:
            acc = {k: c for k, _, c in payload}
            ex = {k: e for k, e, _ in payload}
        rem = red.reduce(acc, ex, full=True)
        if not rem:
            continue
        if rem[0][1] == 0:
            return GroebnerBasis(ring, order, [ring.one()], max_degree)
        rem = _make_monic(rem, p)
        d = mdeg(rem[0][1])
        if degree_cap is not None and d > degree_cap:
            raise DegreeBoundExceeded(d, degree_cap, state=[Polynomial(ring, {e: c for _, e, c in t})
                                                           for t in red.polys])
        hi = red.add(rem)
        sugar.append(max(s, d))
        active.append(True)
        update(hi)

    # minimal basis then interreduce
    idx = [i for i in range(len(red.polys)) if active[i]]
    lms = red.lms
    minimal = []
    for i in idx:
        if any(j != i and divides(lms[j], lms[i]) and (lms[j] != lms[i] or j < i) for j in idx):
            continue
        minimal.append(i)
    final = _Reducer(ring, order)
    for i in minimal:
        final.add(red.polys[i])
    out_terms = []
    for pos, i in enumerate(minimal):
        t = red.polys[i]
        head = t[0]
        tail = {k: c for k, _, c in t[1:]}
        ex = {k: e for k, e, _ in t[1:]}
        rem = final.reduce(tail, ex, full=True)
        out_terms.append([head] + rem)
    out_terms.sort(key=lambda t: t[0][0])
    polys = [Polynomial(ring, {e: c for _, e, c in t}) for t in out_terms]
    fin = _Reducer(ring, order)
    for t in out_terms:
        fin.add(t)
    return GroebnerBasis(ring, order, polys, max_degree, fin)


def is_groebner(basis: GroebnerBasis) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    red = basis._reducer
    key = basis.order.key
    n = len(red.polys)
    for i in range(n):
        for j in range(i + 1, n):
            L = basis.ring.lcm(red.lms[i], red.lms[j])
            if L == red.lms[i] + red.lms[j]:
                continue
            acc, ex = _spoly(red, i, j, L, key)
            if red.reduce(acc, ex):
                return False
    return True


# ----------------------------------------------------------------------------
# elimination


def eliminate(gens: Sequence[Polynomial], drop: Iterable[int],
              ring: PolynomialRing | None = None,
              degree_cap: int | str | None = USE_DEFAULT) -> list[Polynomial]:
    """Generators of ``<gens> ∩ k[variables not in drop]`` via a block order."""
    gens = [g for g in gens if g]
    drop = sorted(set(drop))
    if ring is None:
        if not gens:
            return []
        ring = gens[0].ring
    if not drop:
        return list(groebner_basis(ring, gens, degree_cap=degree_cap).generators)
    order = block_order(ring.nvars, drop)
    gb = groebner_basis(ring, gens, order, degree_cap=degree_cap)
    dropmask = 0
    for i in drop:
        dropmask |= EXP_MASK << (EXP_BITS * i)
    return [g for g in gb.generators if all(not (m & dropmask) for m in g.data)]


# ----------------------------------------------------------------------------
# Hilbert series of monomial ideals


@dataclass
class HilbertData:
    codim: int
    degree: int
    numerator: list[int]
    nvars: int

    @property
    def dim(self) -> int:
        return self.nvars - self.codim


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim_zeros(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _minimalize(ring: PolynomialRing, gens: Iterable[int]) -> list[int]:
    gs = sorted(set(gens), key=ring.mono_degree)
    out: list[int] = []
    guard = ring.guard
    for g in gs:
        if not any(not ((g - h) & guard) for h in out):
            out.append(g)
    return out


def hilbert_numerator(ring: PolynomialRing, monomials: Iterable[int]) -> list[int]:
    """Numerator N(t) with HS(R/I) = N(t) / (1-t)^n for a monomial ideal I."""
    memo: dict[frozenset, list[int]] = {}
    mdeg = ring.mono_degree
    lcm = ring.lcm
    guard = ring.guard

    def rec(gens: list[int]) -> list[int]:
        if not gens:
            return [1]
        fk = frozenset(gens)
        hit = memo.get(fk)
        if hit is not None:
            return hit
        # pairwise coprime generators: product of (1 - t^deg)
        coprime = True
        acc = 0
        for g in gens:
            if lcm(acc, g) != acc + g:
                coprime = False
                break
            acc += g
        if coprime:
            out = [1]
            for g in gens:
                d = mdeg(g)
                f = [0] * (d + 1)
                f[0], f[d] = 1, -1
                out = _poly_mul(out, f)
            memo[fk] = out
            return out
        # pivot: most frequent variable among generators of largest support
        big = max(gens, key=lambda g: len(ring.support(g)))
        counts = {}
        for g in gens:
            for v in ring.support(g):
                counts[v] = counts.get(v, 0) + 1
        var = max(ring.support(big), key=lambda v: counts[v])
        x = ring.var_exp(var)
        plus = _minimalize(ring, [g for g in gens if (g - x) & guard] + [x])
        colon = _minimalize(ring, [g - ring.gcd(g, x) for g in gens])
        a = rec(plus)
        b = rec(colon)
        out = _trim_zeros(_poly_add(a, [0] + b))
        memo[fk] = out
        return out

    return rec(_minimalize(ring, monomials))


def hilbert_from_monomials(ring: PolynomialRing, monomials: Iterable[int]) -> HilbertData:
    num = hilbert_numerator(ring, monomials)
    codim = 0
    q = list(num)
    while sum(q) == 0 and any(q):
        # divide by (1 - t)
        out = []
        acc = 0
        for c in q[:-1]:
            acc += c
            out.append(acc)
        q = out
        codim += 1
    degree = sum(q)
    return HilbertData(codim, degree, num, ring.nvars)


def check_homogeneous(polys: Iterable[Polynomial]) -> None:
    for f in polys:
        if not f.is_homogeneous():
            raise NotHomogeneousError(f"generator is not homogeneous: {f!r}")


def hilbert(basis: GroebnerBasis) -> HilbertData:
    """Codimension and degree from the initial ideal of a homogeneous basis."""
    check_homogeneous(basis.generators)
    if basis.truncated_at is not None:
        raise ValueError("Hilbert data needs a complete (untruncated) basis")
    return hilbert_from_monomials(basis.ring, basis.initial_ideal)
