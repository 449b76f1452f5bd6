"""Bayesian networks, d-separation, Markov properties and CI ideals."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .algebra import PLUS, Field, Polynomial, PolynomialRing, marginal_form, ring_for_table


@dataclass(frozen=True)
class CIStatement:
    """``A ⊥ B | C`` over 1-based node labels."""

    A: frozenset
    B: frozenset
    C: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "A", frozenset(self.A))
        object.__setattr__(self, "B", frozenset(self.B))
        object.__setattr__(self, "C", frozenset(self.C))
        if not self.A or not self.B:
            raise ValueError("A and B must be non-empty")
        if self.A & self.B or self.A & self.C or self.B & self.C:
            raise ValueError("A, B, C must be pairwise disjoint")

    def canonical(self) -> "CIStatement":
        if min(self.A) > min(self.B):
            return CIStatement(self.B, self.A, self.C)
        return self

    def __str__(self):
        def fmt(s):
            s = sorted(s)
            return str(s[0]) if len(s) == 1 else "{" + ",".join(map(str, s)) + "}"
        out = f"{fmt(self.A)} ⊥ {fmt(self.B)}"
        return out + (f" | {fmt(self.C)}" if self.C else "")


class Network:
    """Acyclic digraph on nodes ``1..n`` whose edges ``(i, j)`` all satisfy ``i > j``."""

    def __init__(self, levels: Sequence[int], edges: Iterable[tuple[int, int]] = ()):
        self.levels = tuple(int(d) for d in levels)
        self.n = len(self.levels)
        if any(d < 2 for d in self.levels):
            raise ValueError("every node needs at least two levels")
        self.edges = frozenset((int(i), int(j)) for i, j in edges)
        for i, j in self.edges:
            if not (1 <= j < i <= self.n):
                raise ValueError(f"edge ({i},{j}) violates the i > j convention")
        self._parents = {v: frozenset(i for i, j in self.edges if j == v) for v in self.nodes}
        self._children = {v: frozenset(j for i, j in self.edges if i == v) for v in self.nodes}

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    # construction / io --------------------------------------------------
    @classmethod
    def from_children(cls, children: Sequence[Iterable[int]], levels: Sequence[int] | None = None):
        """Build from the children lists ``(ch(1), ..., ch(n))`` used in Table-style listings."""
        n = len(children)
        levels = levels if levels is not None else [2] * n
        edges = [(i + 1, j) for i, ch in enumerate(children) for j in ch]
        return cls(levels, edges)

    def children_lists(self) -> list[list[int]]:
        return [sorted(self._children[v]) for v in self.nodes]

    def to_json(self) -> dict:
        return {"levels": list(self.levels), "children": self.children_lists()}

    @classmethod
    def from_json(cls, data: dict) -> "Network":
        return cls.from_children(data["children"], data.get("levels"))

    @classmethod
    def load(cls, path: str | Path) -> "Network":
        return cls.from_json(json.loads(Path(path).read_text()))

    def with_levels(self, levels: Sequence[int]) -> "Network":
        return Network(levels, self.edges)

    def __eq__(self, other):
        return isinstance(other, Network) and self.levels == other.levels and self.edges == other.edges

    def __hash__(self):
        return hash((self.levels, self.edges))

    def __repr__(self):
        ch = ", ".join("{" + ", ".join(map(str, c)) + "}" for c in self.children_lists())
        return f"Network(({ch}), levels={list(self.levels)})"

    # structure ------------------------------------------------------------
    def parents(self, i: int) -> frozenset:
        return self._parents[i]

    def children(self, i: int) -> frozenset:
        return self._children[i]

    def descendants(self, i: int) -> frozenset:
        seen: set[int] = set()
        stack = list(self._children[i])
        while stack:
            v = stack.pop()
            if v not in seen:
                seen.add(v)
                stack.extend(self._children[v])
        return frozenset(seen)

    def ancestors(self, nodes: Iterable[int]) -> frozenset:
        seen: set[int] = set()
        stack = list(nodes)
        while stack:
            v = stack.pop()
            if v not in seen:
                seen.add(v)
                stack.extend(self._parents[v])
        return frozenset(seen)

    def nondescendents(self, i: int) -> frozenset:
        return frozenset(self.nodes) - self.descendants(i) - {i}

    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    def is_forest(self) -> bool:
        return all(len(self._parents[v]) <= 1 for v in self.nodes)

    def relabel(self, perm: dict[int, int]) -> "Network":
        """Apply a node relabeling that keeps every edge pointing downwards."""
        levels = [0] * self.n
        for v in self.nodes:
            levels[perm[v] - 1] = self.levels[v - 1]
        return Network(levels, [(perm[i], perm[j]) for i, j in self.edges])


# ----------------------------------------------------------------------------
# d-separation


def _check_disjoint(A, B, C):
    if A & B or A & C or B & C:
        raise ValueError("A, B, C must be pairwise disjoint")


def d_separated(net: Network, A: Iterable[int], B: Iterable[int], C: Iterable[int] = ()) -> bool:
    """True iff every chain from A to B is blocked by C (reachability formulation)."""
    A, B, C = frozenset(A), frozenset(B), frozenset(C)
    _check_disjoint(A, B, C)
    anc_c = net.ancestors(C)
    # states: (node, arrived_from_child) ; arrived_from_child=True means travelling "up"
    stack = [(a, True) for a in A]
    visited: set = set()
    while stack:
        v, up = stack.pop()
        if (v, up) in visited:
            continue
        visited.add((v, up))
        if v in B:
            return False
        if up:
            if v not in C:
                stack.extend((u, True) for u in net.parents(v))
                stack.extend((w, False) for w in net.children(v))
        else:
            if v not in C:
                stack.extend((w, False) for w in net.children(v))
            if v in anc_c:
                stack.extend((u, True) for u in net.parents(v))
    return True


def d_separated_bruteforce(net: Network, A, B, C=()) -> bool:
    """Enumerate every simple chain between A and B and test the blocking rules."""
    A, B, C = frozenset(A), frozenset(B), frozenset(C)
    _check_disjoint(A, B, C)
    nbrs = {v: net.parents(v) | net.children(v) for v in net.nodes}

    def blocked(path):
        for k in range(1, len(path) - 1):
            prev, v, nxt = path[k - 1], path[k], path[k + 1]
            collider = (prev, v) in net.edges and (nxt, v) in net.edges
            if v in C and not collider:
                return True
            if v not in C and collider and not (net.descendants(v) & C):
                return True
        return False

    def paths(start):
        stack = [[start]]
        while stack:
            path = stack.pop()
            last = path[-1]
            if last in B and len(path) > 1:
                yield path
                continue
            for w in nbrs[last]:
                if w not in path:
                    stack.append(path + [w])

    for a in A:
        if a in B:
            return False
        for path in paths(a):
            if not blocked(path):
                return False
    return True


# ----------------------------------------------------------------------------
# Markov properties


def local_markov(net: Network) -> list[CIStatement]:
    out = []
    for i in net.nodes:
        pa = net.parents(i)
        others = net.nondescendents(i) - pa
        if others:
            out.append(CIStatement({i}, others, pa))
    return out


MAX_GLOBAL_NODES = 6


def global_markov(net: Network, prune: bool = True) -> list[CIStatement]:
    """All d-separation statements ``A ⊥ B | C``; optionally only maximal ones."""
    if net.n > MAX_GLOBAL_NODES:
        raise ValueError(f"global Markov enumeration is limited to {MAX_GLOBAL_NODES} nodes")
    found = []
    nodes = list(net.nodes)
    for labels in itertools.product(range(4), repeat=net.n):
        A = frozenset(v for v, l in zip(nodes, labels) if l == 1)
        B = frozenset(v for v, l in zip(nodes, labels) if l == 2)
        C = frozenset(v for v, l in zip(nodes, labels) if l == 3)
        if not A or not B or min(A) > min(B):
            continue
        if d_separated(net, A, B, C):
            found.append(CIStatement(A, B, C))
    if not prune:
        return sorted(found, key=_statement_key)
    found.sort(key=lambda s: -(len(s.A) + len(s.B)))
    kept: list[CIStatement] = []
    for s in found:
        if any(_implies(t, s) for t in kept):
            continue
        kept.append(s)
    return sorted(kept, key=_statement_key)


def _implies(t: CIStatement, s: CIStatement) -> bool:
    """Whether s follows from t by decomposition and weak union.

    The ideal of such an s lies in the ideal of t: its matrices are obtained
    from t's by fixing some row or column indices and summing over others.
    """
    if not (t.C <= s.C <= t.C | t.A | t.B):
        return False
    return (s.A <= t.A and s.B <= t.B) or (s.A <= t.B and s.B <= t.A)


def _statement_key(s: CIStatement):
    return (sorted(s.C), sorted(s.A), sorted(s.B))


# ----------------------------------------------------------------------------
# ideals


def ci_generators(statement: CIStatement, ring: PolynomialRing) -> list[Polynomial]:
    """The 2x2 minors of the marginal A-by-B tables, one table per level of C."""
    levels = ring.shape["levels"]
    n = len(levels)
    A, B, C = (sorted(statement.A), sorted(statement.B), sorted(statement.C))
    if max(A + B + C) > n:
        raise ValueError("statement mentions a node outside the network")

    def joint(nodes):
        return list(itertools.product(*[range(1, levels[v - 1] + 1) for v in nodes]))

    rows, cols = joint(A), joint(B)
    out = []
    cache: dict = {}
    for c in joint(C):
        def entry(a, b):
            key = (a, b, c)
            if key not in cache:
                pat = [PLUS] * n
                for v, x in zip(A, a):
                    pat[v - 1] = x
                for v, x in zip(B, b):
                    pat[v - 1] = x
                for v, x in zip(C, c):
                    pat[v - 1] = x
                cache[key] = marginal_form(ring, pat)
            return cache[key]
        for a1, a2 in itertools.combinations(rows, 2):
            for b1, b2 in itertools.combinations(cols, 2):
                f = entry(a1, b1) * entry(a2, b2) - entry(a1, b2) * entry(a2, b1)
                if f:
                    out.append(f)
    return out


def ci_ideal(statement: CIStatement, levels: Sequence[int] | None = None,
             ring: PolynomialRing | None = None):
    from .ideals import Ideal
    ring = ring or ring_for_table(levels)
    return Ideal(ring, ci_generators(statement, ring))


def markov_ideal(statements: Iterable[CIStatement], levels: Sequence[int] | None = None,
                 ring: PolynomialRing | None = None, marginalized: bool = False,
                 field: Field | None = None, trim: bool = True):
    """Sum of the CI ideals of ``statements``, with a linearly independent generator set."""
    from .ideals import Ideal, linear_basis_subset
    ring = ring or ring_for_table(levels, marginalized, field)
    gens: list[Polynomial] = []
    for s in statements:
        gens.extend(ci_generators(s, ring))
    if trim:
        gens = linear_basis_subset(gens)
    return Ideal(ring, gens)


def local_ideal(net: Network, marginalized: bool = True, field: Field | None = None,
                ring: PolynomialRing | None = None):
    return markov_ideal(local_markov(net), net.levels, ring=ring,
                        marginalized=marginalized, field=field)


def global_ideal(net: Network, marginalized: bool = True, field: Field | None = None,
                 ring: PolynomialRing | None = None, prune: bool = True):
    return markov_ideal(global_markov(net, prune=prune), net.levels, ring=ring,
                        marginalized=marginalized, field=field)
