from __future__ import annotations

import random

import pytest

from bnideal.algebra import Field, ring_for_table
from bnideal.ideals import Ideal, equal
from bnideal.secant import (SegreShape, degree9_invariant, expected_dimension, flattening_cubics,
                            flattening_determinants, random_secant_point, secant_ideal_small,
                            span_dimension, strassen_quartics, terracini_dimension)

from conftest import slow

P = 32003
F = Field(P)

# shape: (dim X, dim Sec^2, degree, cubics)
TABLE3 = {
    (2, 2, 3): (4, 9, 6, 4),
    (2, 2, 2, 2): (4, 9, 64, 32),
    (2, 2, 4): (5, 11, 20, 16),
    (2, 3, 3): (5, 11, 57, 36),
    (2, 2, 2, 3): (5, 11, 526, 184),
    (2, 2, 2, 2, 2): (5, 11, 3256, 768),
    (2, 2, 5): (6, 13, 50, 40),
    (2, 3, 4): (6, 13, 276, 120),
    (3, 3, 3): (6, 13, 783, 222),
    (2, 2, 2, 4): (6, 13, 2388, 544),
    (2, 2, 3, 3): (6, 13, 6144, 932),
}
FAST_CUBICS = [s for s in TABLE3 if len(ring_for_table(s).variables) <= 27]


@pytest.mark.parametrize("shape", sorted(TABLE3))
def test_dimensions(shape):
    dim_x, dim_sec, _, _ = TABLE3[shape]
    assert expected_dimension(SegreShape(shape, 1)) == dim_x
    assert expected_dimension(SegreShape(shape, 2)) == dim_sec
    assert terracini_dimension(SegreShape(shape, 1)) == dim_x
    assert terracini_dimension(SegreShape(shape, 2)) == dim_sec


def test_defective_case():
    shape = SegreShape((2, 2, 2, 2), 3)
    assert expected_dimension(shape) == 14
    assert terracini_dimension(shape) == 13
    # the seed does not matter
    assert {terracini_dimension(shape, seed=s) for s in range(3)} == {13}


@pytest.mark.parametrize("shape", FAST_CUBICS)
def test_cubic_counts(shape):
    assert flattening_cubics(shape).span == TABLE3[shape][3]


def test_ternary_cubic_minors():
    rep = flattening_cubics((3, 3, 3))
    assert len(rep.cubics) == 3 * 84 and rep.span == 222


@slow
@pytest.mark.parametrize("shape", [s for s in TABLE3 if s not in FAST_CUBICS])
def test_cubic_counts_large(shape):
    assert flattening_cubics(shape).span == TABLE3[shape][3]


def test_cubics_vanish_on_secant_points():
    rng = random.Random(1)
    shape = SegreShape((2, 3, 3), 2)
    cubics = flattening_cubics(shape.levels).cubics
    pt = random_secant_point(shape, rng, P)
    assert all(F(f.evaluate(pt)) == 0 for f in cubics)
    pt3 = random_secant_point(shape, rng, P, r=3)
    assert any(F(f.evaluate(pt3)) != 0 for f in cubics)


def test_secant_ideal_223():
    rep = secant_ideal_small(SegreShape((2, 2, 3), 2), F)
    assert (rep.degree, rep.mingens) == (6, 4)
    assert all(f.total_degree() == 3 for f in rep.ideal.generators)
    cubics = Ideal(rep.ideal.ring, flattening_cubics((2, 2, 3), rep.ideal.ring).cubics)
    assert equal(cubics, rep.ideal)


def test_secant_ideal_224():
    rep = secant_ideal_small(SegreShape((2, 2, 4), 2), F)
    assert (rep.degree, rep.mingens) == (20, 16)
    ring = rep.ideal.ring
    assert equal(Ideal(ring, flattening_cubics((2, 2, 4), ring).cubics), rep.ideal)


@slow
def test_secant_ideal_233():
    rep = secant_ideal_small(SegreShape((2, 3, 3), 2), F, max_table=18, max_params=30)
    assert (rep.degree, rep.mingens) == (57, 36)


def test_secant_ideal_limits():
    with pytest.raises(ValueError):
        secant_ideal_small(SegreShape((2, 2, 2, 3), 2), F)
    rep = secant_ideal_small(SegreShape((3, 3, 3), 5), F)
    assert rep.ideal.is_zero()


def test_four_by_four_determinants():
    ring = ring_for_table((2, 2, 2, 2))
    dets = flattening_determinants((2, 2, 2, 2), 4, ring)
    assert len(dets) == 3
    assert span_dimension(dets) == 2
    pairs = [Ideal(ring, [dets[i], dets[j]]) for i, j in ((0, 1), (0, 2), (1, 2))]
    assert equal(pairs[0], pairs[1]) and equal(pairs[1], pairs[2])
    rng = random.Random(2)
    pt = random_secant_point(SegreShape((2, 2, 2, 2), 3), rng, P)
    assert all(F(d.evaluate(pt)) == 0 for d in dets)


def test_strassen_quartics():
    qs = strassen_quartics()
    assert len(qs) == 27 and all(q.total_degree() == 4 for q in qs)
    rng = random.Random(3)
    shape = SegreShape((3, 3, 3), 3)
    pt = random_secant_point(shape, rng, P)
    assert all(F(q.evaluate(pt)) == 0 for q in qs)
    pt4 = random_secant_point(shape, rng, P, r=4)
    assert any(F(q.evaluate(pt4)) != 0 for q in qs)


def test_degree_nine_invariant():
    f = degree9_invariant()
    assert len(f.data) == 9216 and f.is_homogeneous() and f.total_degree() == 9
    rng = random.Random(4)
    shape = SegreShape((3, 3, 3), 4)
    for _ in range(3):
        assert F(f.evaluate(random_secant_point(shape, rng, P))) == 0
    assert F(f.evaluate(random_secant_point(shape, rng, P, r=5))) != 0
