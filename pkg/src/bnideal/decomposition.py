"""Primality certificates, radical tests, minimal primes and network classification."""

from __future__ import annotations

import heapq
import itertools
import logging
import time
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .algebra import EXP_BITS, EXP_MASK, PLUS, Polynomial, PolynomialRing, marginal_form
from .bayes import Network, global_ideal, local_ideal
from .groebner import DegreeBoundExceeded, hilbert
from .ideals import (Ideal, colon_stable, equal, exact_divide, intersect, is_regular, quotient,
                     radical_membership, saturate)

log = logging.getLogger(__name__)

PRIME, NOT_PRIME, UNKNOWN = "prime", "not-prime", "unknown"
RADICAL, NOT_RADICAL = "radical", "not-radical"
SKIPPED = "skipped"  # model not requested


@dataclass
class Verdict:
    status: str
    witness: Polynomial | None = None
    detail: str = ""

    def __bool__(self):
        return self.status in (PRIME, RADICAL)


# ----------------------------------------------------------------------------
# limited factorizer


def monomial_content(f: Polynomial) -> int:
    """Packed gcd of all monomials of f."""
    ring = f.ring
    it = iter(f.data)
    g = next(it)
    for m in it:
        g = ring.gcd(g, m)
        if not g:
            break
    return g


def _div_monomial(f: Polynomial, m: int) -> Polynomial:
    return Polynomial(f.ring, {e - m: c for e, c in f.data.items()})


def marginal_forms(ring: PolynomialRing) -> list[Polynomial]:
    """Linear forms of marginal type registered for trial division (table rings only)."""
    cache = ring.shape.get("_margforms")
    if cache is not None:
        return cache
    out = []
    levels = ring.shape.get("levels")
    if levels:
        slots = [[PLUS] + list(range(1, d + 1)) for d in levels]
        for pat in itertools.product(*slots):
            if PLUS in pat:
                f = marginal_form(ring, pat)
                if len(f.data) > 1:
                    out.append(f)
    ring.shape["_margforms"] = out
    return out


def split_factor(f: Polynomial) -> tuple[Polynomial, Polynomial] | None:
    """A nontrivial factorization ``f = a*b`` found by the limited factorizer, or None.

    Tries monomial content (a single variable split off), then trial division by
    registered marginal linear forms.  A monomial of degree >= 2 splits off
    one variable.  Binomials with a common monomial factor are
    covered by the content step.
    """
    if f.total_degree() <= 1:
        return None
    ring = f.ring
    m = monomial_content(f)
    if m and (len(f.data) > 1 or ring.mono_degree(m) > 1):
        i = ring.support(m)[0]
        x = ring.var(i)
        return x, _div_monomial(f, ring.var_exp(i))
    for form in marginal_forms(ring):
        try:
            q = exact_divide(f, form)
        except ArithmeticError:
            continue
        return form, q
    return None


def _primitive_binomial(f: Polynomial) -> bool:
    if len(f.data) != 2:
        return False
    a, b = f.data
    ring = f.ring
    if ring.gcd(a, b):
        return False
    ea, eb = ring.unpack(a), ring.unpack(b)
    g = 0
    for x, y in zip(ea, eb):
        g = gcd(g, x - y)
    return g == 1


def _quadric_rank(f: Polynomial) -> int:
    from .linalg import rank
    ring = f.ring
    n = ring.nvars
    p = ring.field.characteristic
    if p == 2:
        return -1
    mat = [[0] * n for _ in range(n)]
    half = ring.field.inv(ring.field(2))
    for m, c in f.data.items():
        s = ring.support(m)
        if len(s) == 1:
            mat[s[0]][s[0]] = c
        else:
            i, j = s
            mat[i][j] = mat[j][i] = ring.field(c * half)
    used = sorted({i for m in f.data for i in ring.support(m)})
    sub = [[mat[i][j] for j in used] for i in used]
    return rank(sub, p)


def principal_is_irreducible(f: Polynomial) -> bool | None:
    """True when f is certainly irreducible, False when it certainly factors, else None."""
    d = f.total_degree()
    if d <= 1:
        return True
    if split_factor(f) is not None:
        return False
    if not f.is_homogeneous():
        return None
    if d == 2:
        r = _quadric_rank(f)
        if r >= 3:
            return True
        if r in (1, 2):
            return False
    if _primitive_binomial(f):
        return True
    return None


# ----------------------------------------------------------------------------
# birational projection


@dataclass
class Projection:
    variable: int
    g: Polynomial
    h: Polynomial
    J1: Ideal | None = None
    zero_divisor: Polynomial | None = None


def _linear_in(f: Polynomial, x: int) -> bool:
    sh = EXP_BITS * x
    return max((m >> sh) & EXP_MASK for m in f.data) == 1


def substitute_out(J: Ideal, x: int, g: Polynomial, h: Polynomial) -> Ideal:
    """Generators of ``J ∩ R[x̂]`` given ``g x + h ∈ J`` with g a nonzerodivisor mod J.

    Each generator F is replaced by ``g^deg_x(F) F(-h/g)``; the result is then
    saturated by g.
    """
    ring = J.ring
    gens = []
    mh = -h
    for F in J.gb().generators:
        D = F.degree_in(x)
        if D == 0:
            gens.append(F)
            continue
        coeffs = [ring.zero()] * (D + 1)
        sh = EXP_BITS * x
        for m, c in F.data.items():
            k = (m >> sh) & EXP_MASK
            coeffs[k] = coeffs[k] + Polynomial(ring, {m - (k << sh): c})
        out = ring.zero()
        hp = ring.one()
        gp = [ring.one()]
        for _ in range(D):
            gp.append(gp[-1] * g)
        for k in range(D + 1):
            if coeffs[k]:
                out = out + coeffs[k] * hp * gp[D - k]
            hp = hp * mh
        if out:
            gens.append(out)
    J1 = Ideal(ring, gens)
    if not g.is_constant():
        J1 = saturate(J1, g)
    return J1


def _nonzerodivisor(J: Ideal, g: Polynomial) -> bool:
    if g.is_constant():
        return True
    if len(g.data) == 1:
        return all(equal(quotient(J, J.ring.var(i)), J) for i in J.ring.support(next(iter(g.data))))
    return equal(quotient(J, g), J)


def _candidates(J: Ideal):
    """(x, f) pairs with f in the GB linear in x, constant or monomial coefficients first."""
    out = []
    for f in J.gb().generators:
        for x in f.variables_used():
            if not _linear_in(f, x):
                continue
            g, h = f.coefficient_in(x)
            if g.is_constant():
                rank = (0, 0)
            elif len(g.data) == 1:
                rank = (1, len(g.variables_used()))
            else:
                rank = (2, len(g.data))
            out.append((rank, f.total_degree(), len(f.data), x, g, h))
    out.sort(key=lambda t: t[:3] + (t[3],))
    return out


def birational_project(J: Ideal, x: int | None = None) -> Projection | None:
    """Project away a variable appearing linearly in a GB element.

    Returns a Projection carrying either the elimination ideal J1 (when the
    coefficient g is a nonzerodivisor) or g as a zero-divisor witness; None
    when no GB element is linear in an admissible variable.
    """
    for _, _, _, v, g, h in _candidates(J):
        if x is not None and v != x:
            continue
        if J.contains(g):
            continue
        if not _nonzerodivisor(J, g):
            return Projection(v, g, h, zero_divisor=g)
        return Projection(v, g, h, J1=substitute_out(J, v, g, h))
    return None


def lift(J1: Ideal, x: int, g: Polynomial, h: Polynomial) -> Ideal:
    """(⟨J1, g x + h⟩ : g^∞), inverse of the projection."""
    ring = J1.ring
    return saturate(J1 + [g * ring.var(x) + h], g)


# ----------------------------------------------------------------------------
# primality


def _catalog(J: Ideal) -> str | None:
    gens = J.gb().generators
    if not gens:
        return PRIME
    if J.gb().is_unit():
        return NOT_PRIME
    if all(g.total_degree() == 1 for g in gens):
        return PRIME
    if len(gens) == 1:
        irr = principal_is_irreducible(gens[0])
        if irr is True:
            return PRIME
        if irr is False:
            return NOT_PRIME
    return None


def is_prime(I: Ideal, max_steps: int = 200) -> Verdict:
    """Certify primality by repeated birational projection."""
    J = I
    for _ in range(max_steps):
        cat = _catalog(J)
        if cat == PRIME:
            return Verdict(PRIME)
        if cat == NOT_PRIME:
            gens = J.gb().generators
            w = None
            if len(gens) == 1 and not J.gb().is_unit():
                pair = split_factor(gens[0])
                w = pair[0] if pair else None
            return Verdict(NOT_PRIME, w, "catalog")
        for f in J.gb().generators:
            pair = split_factor(f)
            if pair is not None and not J.contains(pair[0]) and not J.contains(pair[1]):
                return Verdict(NOT_PRIME, pair[0], "factorable basis element")
        proj = birational_project(J)
        if proj is None:
            return Verdict(UNKNOWN, None, "no birational projection applies")
        if proj.zero_divisor is not None:
            return Verdict(NOT_PRIME, proj.zero_divisor, "zero divisor")
        J = proj.J1
    return Verdict(UNKNOWN, None, "step limit")


# ----------------------------------------------------------------------------
# minimal primes


@dataclass(order=True)
class SplitNode:
    codim: int
    serial: int
    ideal: Ideal = field(compare=False)
    inverted: tuple = field(compare=False, default=())


@dataclass
class PrimeDecomposition:
    components: list
    complete: bool
    unknown: list = field(default_factory=list)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)


def _codim_estimate(J: Ideal) -> int:
    try:
        return hilbert(J.gb()).codim
    except Exception:
        return 0


def _contains_ideal(big: Ideal, small: Ideal) -> bool:
    return all(big.contains(g) for g in small.generators)


def _canonical(P: Ideal) -> tuple:
    return tuple(sorted(g.to_string() for g in P.gb().generators))


def minimal_primes(I: Ideal, max_nodes: int = 5000) -> PrimeDecomposition:
    """Minimal primes by factor and zero-divisor splitting of the radical.

    A node ``(J, L)`` stands for the closure of ``V(J)`` minus the zero sets of the
    inverted elements L.  A factorable GB element ``f = a*b`` splits it into
    ``(J + a, L)`` and ``((J + b) : a^∞, L + [a])``; a zero divisor g found by
    projection splits it into ``(J + g, L)`` and ``(J : g^∞, L + [g])``.  Nodes
    containing an already found component are dropped.  Leaves are certified
    prime by :func:`is_prime`.
    """
    found: list[Ideal] = []
    unknown: list[Ideal] = []
    counter = itertools.count()
    heap = [SplitNode(_codim_estimate(I), next(counter), I, ())]
    seen: set = set()
    processed = 0
    while heap:
        node = heapq.heappop(heap)
        J = node.ideal
        processed += 1
        if processed > max_nodes:
            unknown.append(J)
            break
        if J.gb().is_unit():
            continue
        key = _canonical(J)
        if key in seen:
            continue
        seen.add(key)
        if any(_contains_ideal(J, P) for P in found):
            continue
        children = None
        for f in J.gb().generators:
            pair = split_factor(f)
            if pair is None:
                continue
            a, b = pair
            children = [(J + [a], node.inverted),
                        (J + [b], node.inverted + (a,))]
            break
        if children is None:
            v = is_prime(J)
            if v.status == PRIME:
                found.append(J)
                continue
            if v.status == UNKNOWN or v.witness is None:
                unknown.append(J)
                continue
            g = v.witness
            children = [(J + [g], node.inverted),
                        (saturate(J, g), node.inverted + (g,))]
        for K, inv in children:
            for h in inv:
                K = saturate(K, h)
            if K.gb().is_unit():
                continue
            heapq.heappush(heap, SplitNode(_codim_estimate(K), next(counter), K, inv))
    # drop non-minimal and duplicate components
    comps: list[Ideal] = []
    for P in sorted(found, key=lambda P: (_codim_estimate(P), _canonical(P))):
        if any(_contains_ideal(P, Q) for Q in comps):
            continue
        comps.append(P)
    comps.sort(key=_canonical)
    return PrimeDecomposition(comps, complete=not unknown, unknown=unknown)


def radical_equals(I: Ideal, components: Sequence[Ideal]) -> bool:
    """Certificate that √I is the intersection of ``components``."""
    for P in components:
        if not all(P.contains(g) for g in I.generators):
            return False
    inter = intersect_all(I.ring, components)
    return all(radical_membership(g, I) for g in inter.generators)


def intersect_all(ring: PolynomialRing, components: Sequence[Ideal]) -> Ideal:
    if not components:
        return Ideal(ring, [ring.one()])
    acc = components[0]
    for P in components[1:]:
        acc = intersect(acc, P)
    return acc


# ----------------------------------------------------------------------------
# radicality


def marginal_variables(ring: PolynomialRing) -> list[Polynomial]:
    """Candidate elements x for the (I : x^2) = (I : x) test."""
    if ring.shape.get("marginalized"):
        return [ring.var(i) for i, v in enumerate(ring.variables)
                if v.family == "p" and v.indices and v.indices[0] == PLUS]
    return [ring.var(i) for i in range(ring.nvars)]


def quotient_witness(I: Ideal, x: Polynomial, known: Ideal | None = None) -> Polynomial | None:
    """An element ``g x`` outside I whose square lies in I, from (I : x^2) != (I : x).

    ``known`` may pass an already computed (I : x).
    """
    Q1 = known if known is not None else quotient(I, x)
    Q2 = quotient(Q1, x)
    for g in Q2.generators:
        if not Q1.contains(g):
            w = g * x
            if not I.contains(w) and I.contains(w * w):
                return w
    return None


def is_radical(I: Ideal, certify: bool = True, candidates: Iterable[Polynomial] | None = None,
               components: Sequence[Ideal] | None = None, known: dict | None = None) -> Verdict:
    """Squarefree initial ideal, then the quotient heuristic, then (optionally) a certificate.

    ``known`` maps candidate variables (as strings) to already computed quotients.
    """
    if I.is_zero() or I.gb().squarefree_initial():
        return Verdict(RADICAL, None, "squarefree initial ideal")
    known = known or {}
    if I.is_homogeneous():
        for x in (candidates if candidates is not None else marginal_variables(I.ring)):
            if x.to_string() not in known and colon_stable(I, x):
                continue
            w = quotient_witness(I, x, known.get(x.to_string()))
            if w is not None:
                return Verdict(NOT_RADICAL, w, "quotient test")
    if not certify:
        return Verdict(UNKNOWN, None, "heuristics inconclusive")
    if components is None:
        dec = minimal_primes(I)
        if not dec.complete:
            return Verdict(UNKNOWN, None, "decomposition incomplete")
        components = dec.components
    inter = intersect_all(I.ring, components)
    for g in inter.generators:
        if not I.contains(g):
            return Verdict(NOT_RADICAL, g, "intersection of minimal primes")
    return Verdict(RADICAL, None, "intersection of minimal primes")


def decompose_primary(I: Ideal, candidate: Sequence[Ideal]) -> bool:
    """Verify a user-supplied decomposition: I equals the intersection of ``candidate``."""
    return equal(I, intersect_all(I.ring, list(candidate)))


# ----------------------------------------------------------------------------
# classification


@dataclass
class IdealReport:
    verdict: str  # prime | radical | not-radical | unknown | skipped
    components: int | None = None
    witness: str | None = None

    def label(self) -> str:
        if self.verdict == PRIME:
            return PRIME
        if self.components is not None and self.verdict in (RADICAL, NOT_RADICAL):
            return f"{self.verdict}, {self.components} comp."
        return self.verdict

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "components": self.components, "witness": self.witness}


@dataclass
class ClassificationRow:
    network: Network
    index: int | None
    codim: int
    degree: int
    mingens: int
    local: IdealReport
    global_: IdealReport
    local_equals_global: bool
    distinguished_equal: bool | None  # global ideal equals ker(Phi)
    seconds: float = 0.0

    def table_global(self) -> str:
        """Global column in the layout of the golden table."""
        if self.local.verdict == PRIME:
            return ""
        return self.global_.verdict

    def csv_fields(self) -> list[str]:
        ch = ", ".join("{" + ", ".join(map(str, c)) + "}" for c in self.network.children_lists())
        return ["" if self.index is None else str(self.index), str(self.codim), str(self.degree), str(self.mingens),
                ch, self.local.label(), self.table_global()]

    def to_json(self) -> dict:
        return {"index": self.index, "network": self.network.to_json(), "codim": self.codim,
                "degree": self.degree, "mingens": self.mingens, "local": self.local.to_json(),
                "global": self.global_.to_json(), "local_equals_global": self.local_equals_global,
                "distinguished_equal": self.distinguished_equal, "seconds": round(self.seconds, 3)}


def distinguished_test(I: Ideal, net: Network) -> tuple[Verdict, dict]:
    """Whether I equals its distinguished component (I : p^inf).

    I equals the iterated saturation exactly when every saturation form is a
    nonzerodivisor modulo I, so the forms are tried one at a time (by the
    Hilbert series criterion) and the first zero divisor stops the search.
    Returns the verdict and a map from form strings to their regularity.
    """
    from .factorization import saturation_forms
    seen: dict[str, bool] = {}
    for f in saturation_forms(net, I.ring):
        regular = is_regular(I, f)
        seen[f.to_string()] = regular
        if not regular:
            return Verdict(NOT_PRIME, None, f"zero divisor {f}"), seen
    return Verdict(PRIME, None, "every saturation form is a nonzerodivisor"), seen


def report_ideal(I: Ideal, net: Network, certify: bool = True,
                 count_nonradical: bool = False,
                 test: tuple[Verdict, dict] | None = None) -> IdealReport:
    """Prime iff I equals its distinguished component; otherwise test radicality.

    Radical ideals are decomposed to count components (and certified when
    ``certify``).  Non-radical ideals carry a witness; counting their minimal
    primes is optional.
    """
    verdict, seen = test if test is not None else distinguished_test(I, net)
    if verdict.status == PRIME:
        return IdealReport(PRIME, 1)
    quick = _quick_radical(I, seen)
    if quick.status == NOT_RADICAL:
        count = None
        if count_nonradical:
            dec = minimal_primes(I)
            count = len(dec.components) if dec.complete else None
        witness = quick.witness.to_string() if quick.witness is not None else quick.detail
        return IdealReport(NOT_RADICAL, count, witness)
    dec = minimal_primes(I)
    if not dec.complete:
        return IdealReport(quick.status, None)
    if quick.status == RADICAL or not certify:
        return IdealReport(quick.status if quick.status == RADICAL else UNKNOWN,
                           len(dec.components))
    rad = is_radical(I, certify=True, candidates=[], components=dec.components)
    return IdealReport(rad.status, len(dec.components),
                       rad.witness.to_string() if rad.witness is not None else None)


def _quick_radical(I: Ideal, seen: dict) -> Verdict:
    """The quotient heuristic over marginal variables that are zero divisors.

    A variable that is regular modulo I has (I : x^2) = (I : x) = I and is
    skipped; zero divisors found by the primality test go first.  Both checks
    use Hilbert series only, and a candidate whose basis passes the degree
    guardrail is skipped.  The first x with (I : x^2) != (I : x) decides the
    verdict; a witness is computed if its reordered basis stays under the cap.
    """
    if I.is_zero() or I.gb().squarefree_initial():
        return Verdict(RADICAL, None, "squarefree initial ideal")
    marg = marginal_variables(I.ring)
    known_zd = [x for x in marg if seen.get(x.to_string()) is False]
    rest = [x for x in marg if x.to_string() not in seen]
    skipped = 0
    for x in known_zd + rest:
        try:
            if x.to_string() not in seen and is_regular(I, x):
                continue
            if colon_stable(I, x):
                continue
        except DegreeBoundExceeded:
            skipped += 1
            continue
        # (I : x^2) != (I : x) already proves I is not radical; the witness is a bonus
        try:
            w = quotient_witness(I, x)
        except DegreeBoundExceeded:
            w = None
        return Verdict(NOT_RADICAL, w, f"(I : x^2) != (I : x) for x = {x}")
    detail = "heuristics inconclusive" + (f" ({skipped} candidates over the degree cap)"
                                          if skipped else "")
    return Verdict(UNKNOWN, None, detail)


def classify(net: Network, index: int | None = None, certify: bool = True,
             field=None, models: Sequence[str] = ("local", "global")) -> ClassificationRow:
    """Table-style record: Hilbert data of the local ideal plus verdicts for both ideals."""
    start = time.perf_counter()
    L = local_ideal(net, field=field)
    h = hilbert(L.gb())
    skipped = IdealReport(SKIPPED)
    G = global_ideal(net, ring=L.ring)
    same = equal(L, G)
    if same:
        # one ideal, so one report fills whichever columns were requested
        local = glob = report_ideal(L, net, certify)
        gprime = local.verdict == PRIME
    else:
        local = report_ideal(L, net, certify) if "local" in models else skipped
        if "global" in models:
            gtest = distinguished_test(G, net)
            gprime = gtest[0].status == PRIME
            glob = report_ideal(G, net, certify, test=gtest)
        else:
            glob, gprime = skipped, None
    return ClassificationRow(net, index, h.codim, h.degree, len(L.generators), local, glob,
                             same, gprime, time.perf_counter() - start)
