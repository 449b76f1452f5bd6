"""Exact coefficient fields, packed monomials, monomial orders and sparse polynomials.

Monomials are exponent vectors packed into a single Python integer, ``EXP_BITS``
bits per variable with the top bit of every field reserved as a guard bit.  That
makes multiplication an integer addition and divisibility a single subtraction
and mask test.  Every monomial order is represented by a *linear* integer key
(``key(a * b) == key(a) + key(b)``) so that sorting and leading-term
selection reduce to integer comparisons.
"""

from __future__ import annotations

import itertools
import random
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

EXP_BITS = 8
EXP_MASK = (1 << EXP_BITS) - 1
MAX_EXP = (1 << (EXP_BITS - 1)) - 1
KEY_BITS = 12

DEFAULT_CHARACTERISTIC = 32003


class RingMismatchError(ValueError):
    """Raised when polynomials from different rings are combined."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Prime field GF(p) (``characteristic=p``) or the rationals (``characteristic=0``)."""

    def __init__(self, characteristic: int = DEFAULT_CHARACTERISTIC):
        if characteristic != 0 and not _is_prime(characteristic):
            raise ValueError(f"characteristic {characteristic} is not prime")
        self.characteristic = characteristic

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime-field"

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    def __call__(self, value):
        p = self.characteristic
        if p:
            if isinstance(value, Fraction):
                return value.numerator * pow(value.denominator, -1, p) % p
            return int(value) % p
        return Fraction(value)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return pow(a, -1, p) if p else 1 / Fraction(a)

    def random_element(self, rng: random.Random, bound: int = 1000):
        p = self.characteristic
        return rng.randrange(p) if p else Fraction(rng.randint(-bound, bound))

    def to_int_str(self, c) -> str:
        """Render a coefficient; prime-field elements use the symmetric residue."""
        p = self.characteristic
        if p:
            return str(c - p if c > p // 2 else c)
        return str(c)


# ----------------------------------------------------------------------------
# variable names


PLUS = 0  # the marginal symbol '+' inside table indices


class VariableName(tuple):
    """``(family, indices)`` where family is one of ``p``, ``q``, ``t``, ``aux``."""

    def __new__(cls, family: str, indices: Sequence[int] = ()):
        if family not in ("p", "q", "t", "aux", "x"):
            raise ValueError(f"unknown variable family {family!r}")
        return super().__new__(cls, (family, tuple(indices)))

    @property
    def family(self) -> str:
        return self[0]

    @property
    def indices(self) -> tuple:
        return self[1]

    def __str__(self):
        if not self.indices:
            return self.family
        return f"{self.family}[{','.join(str(i) for i in self.indices)}]"

    def pretty(self) -> str:
        if self.family == "p":
            return "p_" + "".join("+" if i == PLUS else str(i) for i in self.indices)
        return str(self)


_NAME_RE = re.compile(r"([a-z]+)(?:\[([-0-9,]*)\])?$")


def parse_variable_name(text: str) -> VariableName:
    m = _NAME_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad variable name {text!r}")
    idx = tuple(int(s) for s in m.group(2).split(",") if s) if m.group(2) else ()
    return VariableName(m.group(1), idx)


# ----------------------------------------------------------------------------
# monomial orders


class MonomialOrder:
    """Lex, graded reverse lex, or a two-block elimination order.

    ``ranking`` lists variable positions from largest to smallest; by default the
    ring order ``x0 > x1 > ...``.  For ``block`` the first block is eliminated:
    any monomial involving it is larger than every monomial free of it, and each
    block is compared by grevlex.
    """

    def __init__(self, kind: str = "grevlex", nvars: int = 0,
                 ranking: Sequence[int] | None = None,
                 block: Sequence[Sequence[int]] | None = None):
        if kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.nvars = nvars
        if kind == "block":
            if block is None or len(block) != 2:
                raise ValueError("block order needs (eliminate, keep) groups")
            blocks = [tuple(b) for b in block]
            if sorted(blocks[0] + blocks[1]) != list(range(nvars)):
                raise ValueError("blocks must partition the variables")
            self.blocks = blocks
            self.ranking = tuple(blocks[0] + blocks[1])
        else:
            self.ranking = tuple(range(nvars)) if ranking is None else tuple(ranking)
            if sorted(self.ranking) != list(range(nvars)):
                raise ValueError("ranking must be a permutation of the variables")
            self.blocks = [self.ranking]
        self._coef = self._key_coefficients()
        self._memo: dict[int, int] = {}

    def _key_coefficients(self) -> list[int]:
        # key = sum_i e_i * coef[i]; fields (most significant first) per block:
        # grevlex: deg, deg - e_last, ..., e_first;  lex: e_first, ..., e_last
        fields: list[list[int]] = []  # each field: list of variable positions summed
        if self.kind == "lex":
            fields = [[v] for v in self.ranking]
        else:
            for blk in self.blocks:
                blk = list(blk)
                fields.append(blk)
                for j in range(len(blk) - 1, 0, -1):
                    fields.append(blk[:j])
        coef = [0] * self.nvars
        nf = len(fields)
        for pos, members in enumerate(fields):
            shift = KEY_BITS * (nf - 1 - pos)
            for v in members:
                coef[v] += 1 << shift
        return coef

    def descriptor(self) -> str:
        if self.kind == "block":
            return f"block:{','.join(map(str, self.blocks[0]))}|{','.join(map(str, self.blocks[1]))}"
        return f"{self.kind}:{','.join(map(str, self.ranking))}"

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(self.descriptor())

    def __repr__(self):
        return f"MonomialOrder({self.descriptor()})"

    def key(self, exp: int) -> int:
        k = self._memo.get(exp)
        if k is None:
            k = 0
            e = exp
            i = 0
            coef = self._coef
            while e:
                f = e & EXP_MASK
                if f:
                    k += f * coef[i]
                e >>= EXP_BITS
                i += 1
            self._memo[exp] = k
        return k

    def compare(self, a: int, b: int) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def eliminates(self) -> tuple:
        return self.blocks[0] if self.kind == "block" else ()


def grevlex(nvars: int, ranking=None) -> MonomialOrder:
    return MonomialOrder("grevlex", nvars, ranking=ranking)


def lex(nvars: int, ranking=None) -> MonomialOrder:
    return MonomialOrder("lex", nvars, ranking=ranking)


def block_order(nvars: int, eliminate: Iterable[int]) -> MonomialOrder:
    elim = sorted(set(eliminate))
    keep = [i for i in range(nvars) if i not in set(elim)]
    return MonomialOrder("block", nvars, block=(elim, keep))


# ----------------------------------------------------------------------------
# rings


class PolynomialRing:
    """Ordered registry of variable names over a field, with a default order."""

    def __init__(self, variables: Sequence, field: Field | None = None,
                 order: str = "grevlex", shape: dict | None = None):
        names = [v if isinstance(v, VariableName) else parse_variable_name(str(v))
                 for v in variables]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        self.variables: tuple[VariableName, ...] = tuple(names)
        self.nvars = len(names)
        self.field = field or Field()
        self.index = {v: i for i, v in enumerate(names)}
        self.shape = dict(shape or {})
        n = self.nvars
        self.guard = sum(1 << (EXP_BITS * i + EXP_BITS - 1) for i in range(n))
        self.lows = sum(1 << (EXP_BITS * i) for i in range(n))
        self.order = grevlex(n) if order == "grevlex" else lex(n) if order == "lex" else order
        self._deg_shift = EXP_BITS * (n - 1)

    # identity -----------------------------------------------------------
    def __eq__(self, other):
        return self is other or (isinstance(other, PolynomialRing)
                                 and self.variables == other.variables
                                 and self.field == other.field)

    def __hash__(self):
        return hash((self.variables, self.field))

    def __repr__(self):
        return f"PolynomialRing({self.nvars} vars over {self.field})"

    # monomials ----------------------------------------------------------
    def pack(self, exps: Sequence[int]) -> int:
        m = 0
        for i, e in enumerate(exps):
            if e:
                if e > MAX_EXP or e < 0:
                    raise OverflowError("exponent out of range")
                m |= e << (EXP_BITS * i)
        return m

    def unpack(self, m: int) -> list[int]:
        return [(m >> (EXP_BITS * i)) & EXP_MASK for i in range(self.nvars)]

    def support(self, m: int) -> list[int]:
        out = []
        i = 0
        while m:
            if m & EXP_MASK:
                out.append(i)
            m >>= EXP_BITS
            i += 1
        return out

    def mono_degree(self, m: int) -> int:
        d = 0
        while m:
            d += m & EXP_MASK
            m >>= EXP_BITS
        return d

    def divides(self, a: int, b: int) -> bool:
        return not ((b - a) & self.guard)

    def lcm(self, a: int, b: int) -> int:
        ge = (((a | self.guard) - b) & self.guard) >> (EXP_BITS - 1)
        fill = (ge << EXP_BITS) - ge
        return (a & fill) | (b & ~fill)

    def gcd(self, a: int, b: int) -> int:
        return a + b - self.lcm(a, b)

    def var_exp(self, i: int) -> int:
        return 1 << (EXP_BITS * i)

    # constructors -------------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {0: self.field(1)})

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {0: c} if c else {})

    def var(self, which) -> "Polynomial":
        i = which if isinstance(which, int) else self.index[self._name(which)]
        return Polynomial(self, {1 << (EXP_BITS * i): self.field(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Mapping[int, int] | Sequence[int], coeff=1) -> "Polynomial":
        if isinstance(exps, Mapping):
            full = [0] * self.nvars
            for i, e in exps.items():
                full[i] += e
            exps = full
        c = self.field(coeff)
        return Polynomial(self, {self.pack(exps): c} if c else {})

    def _name(self, which) -> VariableName:
        if isinstance(which, VariableName):
            return which
        if isinstance(which, str):
            return parse_variable_name(which)
        raise TypeError(f"cannot interpret {which!r} as a variable")

    def p(self, *indices) -> "Polynomial":
        """Table variable ``p[u]``; ``'+'`` or 0 denotes a marginal slot."""
        idx = tuple(PLUS if u in ("+", PLUS) else int(u) for u in indices)
        return self.var(VariableName("p", idx))

    def with_variables(self, extra: Sequence, front: bool = False) -> "PolynomialRing":
        extra = [v if isinstance(v, VariableName) else parse_variable_name(str(v)) for v in extra]
        names = (extra + list(self.variables)) if front else (list(self.variables) + extra)
        shape = {k: v for k, v in self.shape.items() if not str(k).startswith("_")}
        return PolynomialRing(names, self.field, shape=shape)

    def random_polynomial(self, rng: random.Random, degree: int = 2, terms: int = 5,
                          homogeneous: bool = False) -> "Polynomial":
        data: dict[int, object] = {}
        for _ in range(terms):
            d = degree if homogeneous else rng.randint(0, degree)
            exps = [0] * self.nvars
            for _ in range(d):
                exps[rng.randrange(self.nvars)] += 1
            c = self.field.random_element(rng)
            if c:
                m = self.pack(exps)
                data[m] = self._add(data.get(m, 0), c)
        return Polynomial(self, {m: c for m, c in data.items() if c})

    def _add(self, a, b):
        p = self.field.characteristic
        return (a + b) % p if p else a + b

    # serialization ------------------------------------------------------
    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(self, text)

    def to_json(self) -> dict:
        return {"field": self.field.characteristic,
                "variables": [str(v) for v in self.variables]}

    @classmethod
    def from_json(cls, data: dict) -> "PolynomialRing":
        return cls(data["variables"], Field(data["field"]))


class Polynomial:
    """Sparse polynomial: mapping packed monomial -> nonzero field element.

    Values are treated as immutable; all arithmetic returns new objects.
    """

    __slots__ = ("ring", "data", "_hash")

    def __init__(self, ring: PolynomialRing, data: dict):
        self.ring = ring
        self.data = data
        self._hash = None

    # basic protocol --------------------------------------------------------
    def __bool__(self):
        return bool(self.data)

    def __len__(self):
        return len(self.data)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.data == other.data
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.data.items()))
        return self._hash

    def _check(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        raise TypeError(f"cannot combine polynomial with {type(other).__name__}")

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        p = self.ring.field.characteristic
        out = dict(self.data)
        for m, c in other.data.items():
            v = out.get(m, 0) + c
            if p:
                v %= p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.characteristic
        return Polynomial(self.ring, {m: (-c) % p if p else -c for m, c in self.data.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        p = self.ring.field.characteristic
        if len(self.data) < len(other.data):
            a, b = self.data, other.data
        else:
            a, b = other.data, self.data
        out: dict = {}
        get = out.get
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = ma + mb
                v = get(m, 0) + ca * cb
                out[m] = v % p if p else v
        if out and self.total_degree() + other.total_degree() > MAX_EXP:
            raise OverflowError("degree exceeds packed exponent range")
        return Polynomial(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = f(c)
        if not c:
            return self.ring.zero()
        p = f.characteristic
        return Polynomial(self.ring, {m: (v * c) % p if p else v * c for m, v in self.data.items()})

    def mul_term(self, mono: int, c) -> "Polynomial":
        p = self.ring.field.characteristic
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m + mono: (v * c) % p if p else v * c
                                      for m, v in self.data.items()})

    # inspection ------------------------------------------------------------
    def total_degree(self) -> int:
        if not self.data:
            return -1
        return max(self.ring.mono_degree(m) for m in self.data)

    def is_homogeneous(self) -> bool:
        degs = {self.ring.mono_degree(m) for m in self.data}
        return len(degs) <= 1

    def is_constant(self) -> bool:
        return all(m == 0 for m in self.data)

    def constant_term(self):
        return self.data.get(0, self.ring.field(0))

    def variables_used(self) -> list[int]:
        s = 0
        for m in self.data:
            s |= ((m | self.ring.guard) - self.ring.lows) & self.ring.guard
        out = []
        i = 0
        while s:
            if s & (1 << (EXP_BITS - 1)):
                out.append(i)
            s >>= EXP_BITS
            i += 1
        return out

    def degree_in(self, i: int) -> int:
        sh = EXP_BITS * i
        return max(((m >> sh) & EXP_MASK for m in self.data), default=-1)

    def terms(self, order: MonomialOrder | None = None) -> list[tuple]:
        """``(coeff, monomial)`` pairs, descending under ``order`` (default ring order)."""
        order = order or self.ring.order
        return [(self.data[m], m) for m in sorted(self.data, key=order.key, reverse=True)]

    def leading_monomial(self, order: MonomialOrder | None = None) -> int:
        order = order or self.ring.order
        return max(self.data, key=order.key)

    def leading_coefficient(self, order: MonomialOrder | None = None):
        return self.data[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self.data:
            return self
        lc = self.leading_coefficient(order)
        return self.scale(self.ring.field.inv(lc)) if lc != 1 else self

    def homogeneous_components(self) -> dict[int, "Polynomial"]:
        parts: dict[int, dict] = {}
        for m, c in self.data.items():
            parts.setdefault(self.ring.mono_degree(m), {})[m] = c
        return {d: Polynomial(self.ring, v) for d, v in parts.items()}

    def coefficient_in(self, i: int) -> tuple["Polynomial", "Polynomial"]:
        """Split ``f = g * x_i + h`` when f has degree <= 1 in ``x_i``."""
        if self.degree_in(i) > 1:
            raise ValueError("polynomial is not linear in the variable")
        xi = 1 << (EXP_BITS * i)
        g, h = {}, {}
        sh = EXP_BITS * i
        for m, c in self.data.items():
            if (m >> sh) & EXP_MASK:
                g[m - xi] = c
            else:
                h[m] = c
        return Polynomial(self.ring, g), Polynomial(self.ring, h)

    # evaluation / substitution --------------------------------------------
    def evaluate(self, point: Sequence) -> object:
        ring = self.ring
        if len(point) != ring.nvars:
            raise ValueError(f"point has {len(point)} coordinates, ring has {ring.nvars}")
        f = ring.field
        p = f.characteristic
        vals = [f(v) for v in point]
        total = 0
        for m, c in self.data.items():
            t = c
            i = 0
            while m:
                e = m & EXP_MASK
                if e:
                    t = t * (pow(vals[i], e, p) if p else vals[i] ** e)
                    if p:
                        t %= p
                m >>= EXP_BITS
                i += 1
            total += t
        return total % p if p else total

    def substitute(self, images: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Ring endomorphism sending variable ``i`` to ``images[i]`` (others fixed)."""
        ring = self.ring
        target = next(iter(images.values())).ring if images else ring
        result: dict = {}
        p = ring.field.characteristic
        cache: dict[tuple, Polynomial] = {}
        for m, c in self.data.items():
            keep = 0
            term = None
            i = 0
            mm = m
            while mm:
                e = mm & EXP_MASK
                if e:
                    if i in images:
                        key = (i, e)
                        pw = cache.get(key)
                        if pw is None:
                            pw = images[i] ** e
                            cache[key] = pw
                        term = pw if term is None else term * pw
                    else:
                        keep |= e << (EXP_BITS * i)
                mm >>= EXP_BITS
                i += 1
            if term is None:
                v = result.get(keep, 0) + c
                result[keep] = v % p if p else v
            else:
                for tm, tc in term.data.items():
                    k = tm + keep
                    v = result.get(k, 0) + tc * c
                    result[k] = v % p if p else v
        return Polynomial(target, {m: c for m, c in result.items() if c})

    def map_to(self, target: PolynomialRing, mapping: Sequence[int]) -> "Polynomial":
        """Rename variables: variable i goes to target variable ``mapping[i]``."""
        out = {}
        for m, c in self.data.items():
            nm = 0
            i = 0
            while m:
                e = m & EXP_MASK
                if e:
                    j = mapping[i]
                    if j is None:
                        raise ValueError("variable has no image in target ring")
                    nm += e << (EXP_BITS * j)
                m >>= EXP_BITS
                i += 1
            out[nm] = c
        return Polynomial(target, out)

    # text ------------------------------------------------------------------
    def to_string(self, order: MonomialOrder | None = None) -> str:
        if not self.data:
            return "0"
        ring = self.ring
        parts = []
        for c, m in self.terms(order):
            factors = []
            for i, e in enumerate(ring.unpack(m)):
                if e:
                    name = str(ring.variables[i])
                    factors.append(name if e == 1 else f"{name}^{e}")
            cs = ring.field.to_int_str(c)
            if factors:
                if cs == "1":
                    body = "*".join(factors)
                elif cs == "-1":
                    body = "-" + "*".join(factors)
                else:
                    body = cs + "*" + "*".join(factors)
            else:
                body = cs
            parts.append(body)
        out = parts[0]
        for s in parts[1:]:
            out += (" - " + s[1:]) if s.startswith("-") else (" + " + s)
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        s = self.to_string()
        return f"Polynomial({s[:120]}{'...' if len(s) > 120 else ''})"


_TERM_RE = re.compile(r"\s*([+-]?)\s*([^+-]+(?:\[[^\]]*\][^+-]*)*)")


def _split_terms(text: str) -> list[str]:
    terms, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip() and not cur.rstrip().endswith(("*", "^")):
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    if cur.strip():
        terms.append(cur)
    return terms


def parse_polynomial(ring: PolynomialRing, text: str) -> Polynomial:
    """Parse the ``c*p[1,1,2]*p[2,2,1]`` format (``+`` slot rendered as 0)."""
    text = text.strip()
    if text == "0" or not text:
        return ring.zero()
    f = ring.field
    data: dict = {}
    for raw in _split_terms(text):
        raw = raw.replace(" ", "")
        sign = 1
        while raw and raw[0] in "+-":
            if raw[0] == "-":
                sign = -sign
            raw = raw[1:]
        coeff = Fraction(sign)
        exps = [0] * ring.nvars
        for factor in raw.split("*"):
            if not factor:
                continue
            base, _, power = factor.partition("^")
            e = int(power) if power else 1
            if re.fullmatch(r"[0-9]+(/[0-9]+)?", base):
                coeff *= Fraction(base) ** e
            else:
                exps[ring.index[parse_variable_name(base)]] += e
        m = ring.pack(exps)
        v = ring._add(data.get(m, 0), f(coeff))
        data[m] = v
    return Polynomial(ring, {m: c for m, c in data.items() if c})


# ----------------------------------------------------------------------------
# table rings and the binomializing coordinate change


def table_indices(levels: Sequence[int], marginalized_first_index: bool = False) -> list[tuple]:
    ranges = [range(1, d + 1) for d in levels]
    if marginalized_first_index:
        ranges[0] = [PLUS] + list(range(2, levels[0] + 1))
    return [tuple(u) for u in itertools.product(*ranges)]


def ring_for_table(levels: Sequence[int], marginalized_first_index: bool = False,
                   field: Field | None = None) -> PolynomialRing:
    """Ring with one variable ``p[u]`` per cell of a ``d_1 x ... x d_n`` table."""
    levels = tuple(int(d) for d in levels)
    if not levels:
        raise ValueError("levels must be non-empty")
    if any(d < 2 for d in levels):
        raise ValueError("every level must be at least 2")
    names = [VariableName("p", u) for u in table_indices(levels, marginalized_first_index)]
    shape = {"levels": levels, "marginalized": marginalized_first_index}
    return PolynomialRing(names, field, shape=shape)


def _table_ring_pair(ring: PolynomialRing, want_marginalized: bool) -> PolynomialRing:
    levels = ring.shape.get("levels")
    if levels is None:
        raise RingMismatchError("ring is not a table ring")
    if ring.shape.get("marginalized") == want_marginalized:
        raise RingMismatchError("polynomial already lives in the target coordinates")
    key = "_twin"
    twin = ring.shape.get(key)
    if twin is None:
        twin = ring_for_table(levels, want_marginalized, ring.field)
        ring.shape[key] = twin
        twin.shape[key] = ring
    return twin


def binomialize(f: Polynomial) -> Polynomial:
    """Substitute ``p[1,u'] -> p[+,u'] - sum_{i>=2} p[i,u']`` into the marginal ring."""
    src = f.ring
    dst = _table_ring_pair(src, True)
    levels = src.shape["levels"]
    images = {}
    for j, name in enumerate(src.variables):
        u = name.indices
        if u[0] == 1:
            img = dst.p(PLUS, *u[1:])
            for i in range(2, levels[0] + 1):
                img = img - dst.p(i, *u[1:])
        else:
            img = dst.p(*u)
        images[j] = img
    return f.substitute(images)


def unbinomialize(f: Polynomial) -> Polynomial:
    """Inverse of :func:`binomialize`: ``p[+,u'] -> sum_i p[i,u']``."""
    src = f.ring
    dst = _table_ring_pair(src, False)
    levels = src.shape["levels"]
    images = {}
    for j, name in enumerate(src.variables):
        u = name.indices
        if u[0] == PLUS:
            img = dst.zero()
            for i in range(1, levels[0] + 1):
                img = img + dst.p(i, *u[1:])
        else:
            img = dst.p(*u)
        images[j] = img
    return f.substitute(images)


def evaluate(f: Polynomial, point: Sequence):
    return f.evaluate(point)


def marginal_form(ring: PolynomialRing, pattern: Sequence) -> Polynomial:
    """Linear form summing ``p[u]`` over the slots of ``pattern`` equal to ``'+'``.

    Works in both plain and marginalized table rings; in the latter a ``'+'`` in
    the first slot is the variable ``p[+,...]`` itself.
    """
    levels = ring.shape["levels"]
    marg = ring.shape.get("marginalized", False)
    pat = [PLUS if s in ("+", PLUS) else int(s) for s in pattern]
    if len(pat) != len(levels):
        raise ValueError("pattern length must match the table dimension")
    first_plus = pat[0] == PLUS
    slots = [range(1, d + 1) if s == PLUS else [s] for s, d in zip(pat, levels)]
    if marg and first_plus:
        slots[0] = [PLUS]
    total = ring.zero()
    data: dict = {}
    p = ring.field.characteristic
    one = ring.field(1)
    for u in itertools.product(*slots):
        if marg and u[0] == 1:
            # p[1,u'] = p[+,u'] - sum_{i>=2} p[i,u']
            pieces = [((PLUS,) + u[1:], one)] + [((i,) + u[1:], ring.field(-1))
                                                  for i in range(2, levels[0] + 1)]
        else:
            pieces = [(u, one)]
        for idx, c in pieces:
            m = ring.var_exp(ring.index[VariableName("p", idx)])
            v = data.get(m, 0) + c
            data[m] = v % p if p else v
    total = Polynomial(ring, {m: c for m, c in data.items() if c})
    return total
