from __future__ import annotations

import itertools
from math import comb

import pytest

from bnideal.algebra import Field, PolynomialRing, marginal_form
from bnideal.bayes import (CIStatement, Network, global_ideal, global_markov, local_ideal,
                           local_markov, markov_ideal)
from bnideal.decomposition import (NOT_PRIME, NOT_RADICAL, PRIME, RADICAL, classify,
                                   decompose_primary, distinguished_test, intersect_all,
                                   is_prime, is_radical, minimal_primes, principal_is_irreducible,
                                   report_ideal, split_factor)
from bnideal.factorization import distinguished_component
from bnideal.harness import NAMED
from bnideal.ideals import Ideal, equal, is_regular

from conftest import TABLE1_NETS, net

R = PolynomialRing([f"x[{i}]" for i in range(1, 7)], Field(32003))
X = R.gens()


def model_ideal(levels):
    stmts = [CIStatement({1}, {2}, {3}), CIStatement({2}, {3})]
    return markov_ideal(stmts, levels, marginalized=True)


def check_certificate(I, dec):
    """Every component contains I, is prime, and their intersection is I's radical."""
    assert dec.complete
    for P in dec.components:
        assert I.issubset(P)
        assert is_prime(P).status == PRIME
    # pairwise incomparable
    for P, Q in itertools.permutations(dec.components, 2):
        assert not P.issubset(Q)


@pytest.mark.parametrize("levels", [(2, 2, 2), (3, 2, 2), (2, 3, 2), (2, 2, 3)])
def test_three_variable_model(levels):
    d1, d2, d3 = levels
    I = model_ideal(levels)
    assert len(I.generators) == comb(d1, 2) * comb(d2, 2) * d3 + comb(d2, 2) * comb(d3, 2)
    basis = I.gb()
    assert basis.squarefree_initial() and basis.max_degree() <= 4
    assert all(len(g.data) == 2 for g in basis.generators)
    dec = minimal_primes(I)
    assert len(dec.components) == 2 ** d3 - 1
    check_certificate(I, dec)
    assert is_radical(I).status == RADICAL
    assert equal(intersect_all(I.ring, dec.components), I)


def test_catalog_and_principal():
    x1, x2, x3, x4, x5, x6 = X
    assert principal_is_irreducible(x1 * x2 - x3 * x4) is True
    assert principal_is_irreducible(x1 * x1 - x2 * x2) is False
    assert is_prime(Ideal(R, [x1, x2 + x3])).status == PRIME
    assert is_prime(Ideal(R, [x1 * x2])).status == NOT_PRIME
    assert split_factor(x1 * x2 * x3 - x1 * x4 * x5) is not None


def test_birational_projection_on_determinantal_prime():
    x1, x2, x3, x4, x5, x6 = X
    # 2x2 minors of [[x1 x2 x3], [x4 x5 x6]]
    I = Ideal(R, [x1 * x5 - x2 * x4, x1 * x6 - x3 * x4, x2 * x6 - x3 * x5])
    assert is_prime(I).status == PRIME
    J = Ideal(R, [x1 * x5 - x2 * x4, x1 * x6 - x3 * x4])
    v = is_prime(J)
    assert v.status == NOT_PRIME
    dec = minimal_primes(J)
    assert len(dec.components) == 2
    check_certificate(J, dec)


def test_non_radical_witness():
    x1, x2, x3 = X[:3]
    I = Ideal(R, [x1 * x1 * x2, x1 * x3 - x2 * x2])
    v = is_radical(I, certify=True)
    assert v.status == NOT_RADICAL
    assert not I.contains(v.witness) and I.contains(v.witness ** 2)


def test_regularity_by_hilbert_series():
    x1, x2, x3 = X[:3]
    I = Ideal(R, [x1 * x2])
    assert not is_regular(I, x1)
    assert is_regular(I, x1 + x2 + x3)
    assert is_regular(I, x3)


@pytest.mark.parametrize("index,count", [(11, 5), (16, 9), (18, 3)])
def test_table_rows_components(index, count):
    g = net(TABLE1_NETS[index])
    I = local_ideal(g)
    dec = minimal_primes(I)
    assert len(dec.components) == count
    check_certificate(I, dec)
    assert is_radical(I, components=dec.components).status == RADICAL
    verdict, _ = distinguished_test(I, g)
    assert verdict.status == NOT_PRIME


def test_net21_prime_binary_not_radical_ternary():
    assert classify(net(TABLE1_NETS[21])).local.verdict == PRIME
    row = classify(net(TABLE1_NETS[21], [2, 2, 2, 3]))
    assert row.local_equals_global
    assert row.local.verdict == NOT_RADICAL
    I = local_ideal(net(TABLE1_NETS[21], [2, 2, 2, 3]))
    w = I.ring.parse(row.local.witness)
    assert not I.contains(w) and I.contains(w * w)


@pytest.mark.parametrize("index,perm", [(11, {1: 1, 2: 3, 3: 2, 4: 4}),
                                        (26, {1: 1, 2: 3, 3: 2, 4: 4})])
def test_isomorphism_invariance(index, perm):
    g = net(TABLE1_NETS[index])
    h = g.relabel(perm)
    assert h.edges != g.edges
    a, b = classify(g, index).csv_fields(), classify(h, index).csv_fields()
    # identical apart from the network column
    assert a[:4] + a[5:] == b[:4] + b[5:]


def test_decompose_primary_checks_candidates():
    x1, x2, x3 = X[:3]
    I = Ideal(R, [x1 * x2, x1 * x3])
    assert decompose_primary(I, [Ideal(R, [x1]), Ideal(R, [x2, x3])])
    assert not decompose_primary(I, [Ideal(R, [x1])])


def _swap45(stmts):
    sw = {4: 5, 5: 4}
    f = lambda s: frozenset(sw.get(v, v) for v in s)  # noqa: E731
    return {CIStatement(f(t.A), f(t.B), f(t.C)).canonical() for t in stmts}


def test_g201_g214_share_statements():
    g201 = Network.from_children(NAMED["G201"])
    g214 = Network.from_children(NAMED["G214"])
    assert _swap45(global_markov(g214)) == {t.canonical() for t in global_markov(g201)}
    assert _swap45(local_markov(g214)) == {t.canonical() for t in local_markov(g201)}


def test_g201_global_decomposition():
    g = Network.from_children(NAMED["G201"])
    G = global_ideal(g)
    R = G.ring
    # p[+,1,1,1,1] is regular, yet the ideal is not prime
    assert is_regular(G, R.p("+", 1, 1, 1, 1))
    assert distinguished_test(G, g)[0].status == NOT_PRIME
    comps = [distinguished_component(G, g)]
    for slot in (3, 4):
        others = [s for s in (3, 4, 5) if s != slot]
        for v in (1, 2):
            forms = []
            for a, b in itertools.product((1, 2), repeat=2):
                u = ["+", "+", 0, 0, 0]
                u[slot - 1], u[others[0] - 1], u[others[1] - 1] = v, a, b
                forms.append(marginal_form(R, u))
            comps.append(Ideal(R, list(G.generators) + forms))
    assert decompose_primary(G, comps)
    rep = report_ideal(G, g)
    assert (rep.verdict, rep.components) == (RADICAL, 5)
