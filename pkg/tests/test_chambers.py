import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from swlat import chambers as ch
from swlat.acceptance import ell_surface, gt
from swlat.lattice import add, neg, pair_up
from swlat.surfaces import UnsupportedModel

SL = gt(1, 2)
SYSTEM = ch.ChamberSystem.for_surface(SL)
K0 = SL.K0
E1, E2 = SL.exceptionals
KT = add(K0, E1, E2)  # canonical class of the blowup, a wall class here
ACROSS = (13, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4)  # separated from K0 by the wall of KT only


def xi(L):
    return SYSTEM.natural_xi(L)


def test_wall_square():
    assert SYSTEM.wall_square == -1
    assert ch.ChamberSystem.for_surface(gt(3, 1)).wall_square == 2


def test_crossing_twice_is_identity():
    f = ch.distinguished_chamber(SL).values
    once = ch.standard_crossing(f, KT, xi)
    back = ch.standard_crossing(once, neg(KT), xi)
    assert {k: v for k, v in back.items() if v} == f


def test_crossing_is_local():
    f = ch.distinguished_chamber(SL).values
    g = ch.standard_crossing(f, KT, xi)
    changed = {L for (L, _), v in g.items() if v != f.get((L, xi(L)), 0)}
    assert changed == {KT, neg(KT)}


def test_crossing_sign_convention():
    g = ch.standard_crossing({}, KT, xi)
    assert g[(KT, xi(KT))] == -1
    assert g[(neg(KT), xi(neg(KT)))] == 1


def test_k0_lies_on_no_wall():
    assert ch.lies_on_wall(SYSTEM, K0) is None


def test_point_on_wall_is_reported():
    x = (6, 2, 2, 2, 2, 2, 2, 2, 2, 1, 1)
    assert ch.lies_on_wall(SYSTEM, x) == pair_up(KT)
    with pytest.raises(ch.OnWall):
        ch.walls_crossed(SYSTEM, K0, x)


def test_walls_crossed_orientation_and_parameter():
    got = ch.walls_crossed(SYSTEM, K0, ACROSS)
    assert got == [ch.Crossing(neg(KT), Fraction(1, 2))]
    assert SL.space.pairing(got[0].wall, ACROSS) > 0
    assert ch.walls_crossed(SYSTEM, ACROSS, K0) == [ch.Crossing(KT, Fraction(1, 2))]


def test_walls_crossed_rejects_mixed_components():
    with pytest.raises(ch.ChamberError):
        ch.walls_crossed(SYSTEM, K0, neg(ACROSS))


def test_no_walls_without_negative_square():
    sl = gt(3, 1)
    system = ch.ChamberSystem.for_surface(sl)
    x = add(sl.K0, sl.K0, sl.exceptionals[0])
    assert ch.walls_crossed(system, sl.K0, x) == []


def test_function_beyond_one_wall():
    f = ch.sw_for_chamber(SL, ACROSS)
    c0 = ch.distinguished_chamber(SL).by_L()
    assert KT not in f.by_L() and neg(KT) not in f.by_L()
    assert {L: v for L, v in c0.items() if pair_up(L) != pair_up(KT)} == f.by_L()


def test_negative_component_is_negated():
    f = ch.sw_for_chamber(SL, ACROSS)
    g = ch.sw_for_chamber(SL, neg(ACROSS))
    assert g.by_L() == {L: -v for L, v in f.by_L().items()}
    assert g.chamber.component_sign == -1


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_path_independence(seed):
    rng = random.Random(seed)
    x = ch.random_forward_point(SYSTEM, rng, SL.exceptionals)
    via = ch.random_forward_point(SYSTEM, rng, SL.exceptionals)
    assert ch.sw_for_chamber(SL, x, [via]).by_L() == ch.sw_for_chamber(SL, x).by_L()


def test_random_points_stay_off_walls_and_forward():
    rng = random.Random(3)
    for _ in range(20):
        x = ch.random_forward_point(SYSTEM, rng, SL.exceptionals)
        assert SYSTEM.component(x) == 1
        assert ch.lies_on_wall(SYSTEM, x) is None


@pytest.mark.parametrize("ksq, ell", [(1, 2), (1, 3), (2, 3)])
def test_equivariance_under_exceptional_reflections(ksq, ell):
    sl = gt(ksq, ell)
    for e in sl.exceptionals:
        assert ch.reflection_equivariance_check(sl, e, trials=4, seed=ell)
        assert ch.reflection_equivariance_check(sl, neg(e), trials=4, seed=ell + 1)


def test_equivariance_fails_for_reflection_in_canonical_class():
    # KT has square -1 but its reflection moves K0, so it does not preserve C0
    assert not ch.reflection_equivariance_check(SL, KT, trials=10)


def test_corrupted_crossing_is_detected():
    sl = gt(1, 3)
    e = sl.exceptionals[-1]
    assert ch.reflection_equivariance_check(sl, e, trials=30, seed=0)
    assert not ch.reflection_equivariance_check(sl, e, trials=30, seed=0, crossing=ch.one_sided_crossing)


def test_rational_fixture_signs():
    rep = ch.fixture_sign_check()
    assert rep == {"crossed_K": True, "sw_minus_K": 1, "sw_K": -1, "walls": 1}


def test_rational_fixture_catches_one_sided_rule():
    rep = ch.fixture_sign_check(crossing=ch.one_sided_crossing)
    assert rep["sw_minus_K"] != 1


@pytest.mark.parametrize("ksq, ell", [(1, 0), (1, 2), (2, 3), (5, 1), (9, 4)])
def test_distinguished_chamber_properties(ksq, ell):
    sl = gt(ksq, ell)
    assert ch.check_c0_properties(ch.distinguished_chamber(sl), sl) == {"i": True, "ii": True, "iii": True,
                                                                          "iv": True}


def test_c0_check_rejects_mutations():
    f = ch.distinguished_chamber(SL)
    key = next(iter(f.values))
    doubled = ch.ChamberSWFunction(f.chamber, {**f.values, key: 2})
    assert not ch.check_c0_properties(doubled, SL)["i"]
    dropped = ch.ChamberSWFunction(f.chamber, {k: v for k, v in f.values.items() if k != key})
    assert not ch.check_c0_properties(dropped, SL)["ii"]
    assert not ch.check_c0_properties(ch.sw_for_chamber(SL, ACROSS), SL)["ii"]


def test_search_finds_only_c0():
    c0 = ch.distinguished_chamber(SL).by_L()
    found = ch.search_distinguished(SL, 1, 3)
    assert found
    assert all(f.by_L() == c0 or f.negated().by_L() == c0 for f in found)
    assert len(ch.probe_chambers(SL, 1, 3)) > 1


def test_search_in_offset_region_finds_nothing():
    off = (12, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4)
    assert len(ch.probe_chambers(SL, 1, 1, off)) == 1
    assert ch.search_distinguished(SL, 1, 1, off) == []


def test_search_region_without_points():
    with pytest.raises(ch.ChamberError):
        ch.probe_chambers(SL, 1, 1, (9, 3, 3, 3, 3, 3, 3, 3, 3, -4, -4))


def test_search_rejects_bad_grid():
    with pytest.raises(ValueError):
        ch.probe_chambers(SL, -1, 1)


def test_no_sw_trivial_chamber():
    assert not ch.is_sw_trivial_chamber_possible(SL, samples=20)
    assert not ch.is_sw_trivial_chamber_possible(gt(1, 0), samples=20)


def test_cross_wall_requires_separation():
    f = ch.distinguished_chamber(SL)
    with pytest.raises(ch.ChamberError):
        ch.cross_wall(SYSTEM, f, KT, add(K0, K0))
    g = ch.cross_wall(SYSTEM, f, KT, ACROSS)
    assert g.by_L() == ch.sw_for_chamber(SL, ACROSS).by_L()


def test_cross_wall_rejects_non_wall():
    with pytest.raises(ch.ChamberError):
        ch.cross_wall(SYSTEM, ch.distinguished_chamber(SL), E1, ACROSS)


def test_chambers_need_b2_plus_one_general_type():
    with pytest.raises(UnsupportedModel):
        ch.ChamberSystem.for_surface(ell_surface(1, 2, 3))
    with pytest.raises(UnsupportedModel):
        ch.ChamberSystem.for_surface(ell_surface(0, 2, 3))
