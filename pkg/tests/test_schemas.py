from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from pydantic import ValidationError

from swlat import schemas as S
from swlat.acceptance import ell_surface, gt
from swlat.basic_classes import enumerate_basic_classes


@given(st.fractions())
def test_rational_round_trip(q):
    assert S.parse_rational(S.emit_rational(q)) == q


@pytest.mark.parametrize("raw, value", [(3, Fraction(3)), ("3/5", Fraction(3, 5)), (" -2/4 ", Fraction(-1, 2)),
                                        ("7", Fraction(7))])
def test_rational_parsing(raw, value):
    assert S.parse_rational(raw) == value


@pytest.mark.parametrize("raw", [True, 1.5, "1/0", "x", None, [1]])
def test_rational_rejects(raw):
    with pytest.raises(ValueError):
        S.parse_rational(raw)


def test_integral_rationals_print_as_integers():
    assert S.emit_rational(Fraction(6, 3)) == "2"
    assert S.emit_rational(Fraction(-1, 3)) == "-1/3"


@pytest.mark.parametrize("sl", [gt(1, 2), gt(9, 0), ell_surface(0, 2, 5, 2), ell_surface(2, 2, 3)])
def test_basic_set_round_trip(sl):
    bset = enumerate_basic_classes(sl)
    model = S.BasicClassSetModel.of(bset)
    again = S.BasicClassSetModel.model_validate_json(model.model_dump_json())
    assert again.to_set() == bset


def test_basic_set_rank_mismatch():
    model = S.BasicClassSetModel.of(enumerate_basic_classes(gt(8, 0)))
    data = model.model_dump()
    data["classes"][0]["L"] = [1]
    with pytest.raises(ValueError):
        S.BasicClassSetModel.model_validate(data).to_set()


def test_lattice_shape_checked():
    with pytest.raises(ValidationError):
        S.LatticeModel(rank=2, gram=[[1, 0]])


def test_extra_fields_forbidden():
    with pytest.raises(ValidationError):
        S.SurfaceInput(kind="general_type", ksq=1, colour="red")


def test_walls_request_parses_rationals():
    req = S.WallsRequest.model_validate({"surface": {"kind": "general_type", "ksq": 9},
                                         "from_point": [1], "to_point": ["3/2"]})
    assert req.to_point == [Fraction(3, 2)]
    out = S.CrossingModel(wall=[1], parameter=Fraction(1, 2)).model_dump(mode="json")
    assert out == {"wall": [1], "parameter": "1/2"}


def test_check_diffeo_needs_a_target():
    bset = S.BasicClassSetModel.of(enumerate_basic_classes(gt(8, 0)))
    with pytest.raises(ValidationError):
        S.CheckDiffeoRequest(first=bset)


def test_surface_input_to_model():
    surface = S.SurfaceInput(kind="general_type", ksq=2, blowups=1,
                            override={"gram": [[1, 0, 0], [0, -1, 0], [0, 0, -1]], "K0": [3, 1, 0],
                                      "exceptionals": [[0, 0, 1]]})
    model = surface.to_model()
    assert model.override.K0 == (3, 1, 0)
    assert model.override.exceptionals == ((0, 0, 1),)
