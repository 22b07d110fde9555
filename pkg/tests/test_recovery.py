import random

import pytest
from hypothesis import given, settings, strategies as st

from swlat import recovery as rc
from swlat.acceptance import ell_surface, gt, multiplicity_cases, random_isometry, reflection_pool
from swlat.basic_classes import BasicClassSet, SpincBasicClass, enumerate_basic_classes, minimal_basic_classes
from swlat.lattice import add, mat_vec, neg, pair_up, scale


def test_difference_set_of_minimal_general_type():
    sl = gt(2, 0)
    diffs = rc.difference_set(enumerate_basic_classes(sl))
    assert diffs == {sl.K0, neg(sl.K0)}


def test_difference_set_needs_two_classes():
    sl = gt(2, 0)
    single = BasicClassSet(sl.space, sl.K0, (SpincBasicClass(sl.K0, sl.K0),))
    with pytest.raises(rc.RecoveryError):
        rc.difference_set(single)


@pytest.mark.parametrize("ksq, ell", [(1, 0), (1, 3), (4, 2), (9, 1)])
def test_recover_canonical_and_exceptionals(ksq, ell):
    sl = gt(ksq, ell)
    diffs = rc.difference_set(enumerate_basic_classes(sl))
    k0 = rc.recover_K0(sl.space, diffs)
    assert k0.pair == {sl.K0, neg(sl.K0)} and k0.square == ksq
    assert set(rc.recover_exceptionals(sl.space, diffs, k0.K0)) == {pair_up(e) for e in sl.exceptionals}


@given(st.integers(0, 10 ** 6), st.integers(1, 4), st.integers(0, 3))
@settings(max_examples=30, deadline=None)
def test_recovery_commutes_with_isometries(seed, ksq, ell):
    sl = gt(ksq, ell)
    m = random_isometry(sl.space, random.Random(seed), reflection_pool(sl.space))
    diffs = rc.difference_set(enumerate_basic_classes(sl).transform(m))
    k0 = rc.recover_K0(sl.space, diffs)
    image = mat_vec(m, sl.K0)
    assert k0.pair == {image, neg(image)}
    want = {pair_up(mat_vec(m, e)) for e in sl.exceptionals}
    assert set(rc.recover_exceptionals(sl.space, diffs, k0.K0)) == want


@pytest.mark.parametrize("m1, m2, ell", [(2, 3, 0), (2, 3, 2), (2, 5, 1), (3, 5, 2)])
def test_recovery_on_dolgachev(m1, m2, ell):
    sl = ell_surface(0, m1, m2, ell)
    diffs = rc.difference_set(enumerate_basic_classes(sl))
    k0 = rc.recover_K0(sl.space, diffs)
    assert k0.square == 0 and not k0.torsion
    assert k0.pair == {sl.K0, neg(sl.K0)}
    assert set(rc.recover_exceptionals(sl.space, diffs, k0.K0)) == {pair_up(e) for e in sl.exceptionals}


def test_ambiguous_top_square():
    sl = gt(1, 0)
    sp = sl.space
    other = (3, 1, 1, 1, 1, 1, 1, 1, -1)
    assert sp.square(other) == sp.square(sl.K0)
    with pytest.raises(rc.AmbiguousRecovery):
        rc.recover_K0(sp, [sl.K0, neg(sl.K0), other, neg(other)])


def test_no_isotropic_difference_means_torsion():
    sl = gt(1, 1)
    e = sl.exceptionals[0]
    got = rc.recover_K0(sl.space, [e, neg(e)])
    assert got.torsion and not any(got.K0)


def test_summand_class_witness():
    sl = gt(1, 2)
    bset = enumerate_basic_classes(sl)
    K0, (e1, e2) = sl.K0, sl.exceptionals
    n = add(K0, e1, e2)
    assert sl.space.square(n) == -1
    verdict = rc.check_summand_class(bset, K0, sl.exceptionals, n)
    assert verdict == rc.Contradiction(add(scale(3, K0), scale(2, e1), scale(2, e2)))


def test_summand_class_accepts_exceptionals():
    sl = gt(2, 2)
    bset = enumerate_basic_classes(sl)
    assert rc.check_summand_class(bset, sl.K0, sl.exceptionals, sl.exceptionals[1]) == rc.IsExceptional(2, 1)
    assert rc.check_summand_class(bset, sl.K0, sl.exceptionals, neg(sl.exceptionals[0])) == rc.IsExceptional(1, -1)


def test_summand_class_requires_a_difference():
    sl = gt(1, 1)
    bset = enumerate_basic_classes(sl)
    with pytest.raises(rc.RecoveryError):
        rc.check_summand_class(bset, sl.K0, sl.exceptionals, (0, 1, 0, 0, 0, 0, 0, 0, 0, 0))


def test_summand_class_with_isotropic_canonical():
    sl = ell_surface(0, 2, 3, 1)
    bset = enumerate_basic_classes(sl)
    t, e1 = sl.fiber.t, sl.exceptionals[0]
    n = add(scale(2, t), e1)
    verdict = rc.check_summand_class_k0sq_zero(bset, sl.K0, sl.exceptionals, n)
    assert verdict == rc.Contradiction(scale(-3, t))
    assert rc.check_summand_class_k0sq_zero(bset, sl.K0, sl.exceptionals, e1) == rc.IsExceptional(1, 1)


def test_orthogonality_condition():
    sp = gt(1, 2).space
    e1, e2 = gt(1, 2).exceptionals
    assert rc.exceptional_sets_compatible(sp, [e1], [e2, neg(e1)])
    assert not rc.exceptional_sets_compatible(sp, [e1], [add(e1, e2)])


@pytest.mark.parametrize("pg, m1, m2", multiplicity_cases())
def test_multiplicities(pg, m1, m2):
    assert rc.recover_multiplicities(minimal_basic_classes(ell_surface(pg, m1, m2)), pg) == (m1, m2)


def test_multiplicities_need_positive_pg():
    with pytest.raises(rc.RecoveryError):
        rc.recover_multiplicities(minimal_basic_classes(ell_surface(0, 2, 3)), 0)


@pytest.mark.parametrize("ksq", range(1, 10))
def test_plurigenera(ksq):
    sl = gt(ksq, 1)
    got = rc.recover_plurigenera(sl.space, rc.difference_set(enumerate_basic_classes(sl)))
    assert got[2] == ksq + 1
    assert got == {n: n * (n - 1) // 2 * ksq + 1 for n in range(2, 13)}


def test_plurigenera_reject_isotropic_canonical():
    sl = ell_surface(0, 2, 3)
    with pytest.raises(rc.RecoveryError):
        rc.recover_plurigenera(sl.space, rc.difference_set(enumerate_basic_classes(sl)))
