import json

import pytest
from fastapi.testclient import TestClient

from swlat import cli, schemas as S
from swlat.acceptance import ell_surface, gt
from swlat.basic_classes import enumerate_basic_classes
from swlat.lattice import add, scale
from swlat.service import app

client = TestClient(app)

GT12 = {"kind": "general_type", "ksq": 1, "blowups": 2}
SL = gt(1, 2)
K0 = list(SL.K0)
E1, E2 = SL.exceptionals


def basic_set_json(sl=SL):
    return S.BasicClassSetModel.of(enumerate_basic_classes(sl)).model_dump(mode="json")


def ambiguous_set():
    # Xi differences K0 and K0' = (3, 1^7, -1) share the top square 1
    other = [3, 1, 1, 1, 1, 1, 1, 1, -1]
    canon = [3] + [1] * 8
    xis = [[0] * 9, canon, other]
    classes = [{"L": [2 * x - k for x, k in zip(xi, canon)], "Xi": xi, "sw": 1} for xi in xis]
    return {"lattice": {"rank": 9, "gram": [[int(i == j) * (1 if i == 0 else -1) for j in range(9)]
                                            for i in range(9)]},
            "canonical": canon, "classes": classes}


def reflection(n):
    return [list(r) for r in SL.space.reflection_matrix(n)]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ------------------------------------------------------------------ service

def test_enumerate_endpoint():
    r = client.post("/enumerate", json=GT12)
    assert r.status_code == 200
    assert len(r.json()["classes"]) == 8


def test_schema_error_shape():
    r = client.post("/enumerate", json={"kind": "general_type", "ksq": 1, "bogus": 1})
    assert r.status_code == 422
    assert r.json()["error"] == "schema"


def test_unsupported_error_shape():
    r = client.post("/enumerate", json={"kind": "general_type", "ksq": 10})
    assert r.status_code == 400
    assert r.json()["error"] == "unsupported"


def test_ambiguous_error_shape():
    r = client.post("/recover", json={"basic_set": ambiguous_set()})
    assert r.status_code == 409
    assert r.json()["error"] == "ambiguous"


def test_domain_error_on_wall():
    body = {"surface": GT12, "from_point": K0, "to_point": [6] + [2] * 8 + [1, 1]}
    r = client.post("/chambers/walls", json=body)
    assert r.status_code == 400
    assert r.json()["error"] == "domain"


def test_recover_endpoint():
    r = client.post("/recover", json={"basic_set": basic_set_json(), "n_max": 4})
    data = r.json()
    assert data["K0_square"] == 1
    assert data["plurigenera"] == {"2": 2, "3": 4, "4": 7}
    assert sorted(data["exceptionals"]) == sorted([list(E1), list(E2)])


def test_recover_multiplicities_endpoint():
    body = {"basic_set": basic_set_json(ell_surface(2, 2, 5, 1))}
    assert client.post("/recover", json=body).json()["multiplicities"] == [2, 5]


def test_walls_endpoint_serializes_rationals():
    body = {"surface": GT12, "from_point": K0, "to_point": [3] + [1] * 8 + ["3/5", "3/5"]}
    data = client.post("/chambers/walls", json=body).json()
    assert data == {"square": -1, "walls": [{"wall": [-3] + [-1] * 10, "parameter": "5/6"}]}


def test_sw_endpoint_matches_library():
    body = {"surface": GT12, "at": [13] + [4] * 10, "via": [[20] + [6] * 8 + [3, -2]]}
    data = client.post("/chambers/sw", json=body).json()
    assert data["component"] == 1
    assert len(data["values"]) == 6


def test_verify_c0_endpoint():
    assert client.post("/chambers/verify-c0", json={"surface": GT12}).json() == \
        {"i": True, "ii": True, "iii": True, "iv": True}


def test_search_endpoint():
    data = client.post("/chambers/search", json={"surface": GT12, "radius": 1, "denominator": 1}).json()
    assert data["only_distinguished"] and data["matches"]


def test_selftest_endpoint():
    data = client.get("/selftest?only=7").json()
    assert data["passed"] and [x["criterion"] for x in data["results"]] == [7]


def test_thread_limit_from_environment(monkeypatch):
    import anyio.to_thread

    monkeypatch.setenv("SWLAT_THREADS", "3")
    with TestClient(app) as c:
        assert c.get("/selftest?only=7").status_code == 200
        assert c.portal.call(lambda: anyio.to_thread.current_default_thread_limiter().total_tokens) == 3


# ------------------------------------------------------------------ cli

@pytest.fixture
def files(tmp_path):
    surface = tmp_path / "s.json"
    surface.write_text(json.dumps(GT12))
    bset = tmp_path / "b.json"
    bset.write_text(json.dumps(basic_set_json()))
    return surface, bset, tmp_path


def test_cli_enumerate(capsys, files):
    surface, _, _ = files
    code, out, _ = run(capsys, "enumerate", "-i", str(surface))
    assert code == 0
    assert len(json.loads(out)["classes"]) == 8


def test_cli_pretty_and_output(capsys, files):
    surface, _, tmp = files
    target = tmp / "out.json"
    code, out, _ = run(capsys, "enumerate", "-i", str(surface), "--pretty", "-o", str(target))
    assert code == 0 and "8 classes" in out
    assert len(json.loads(target.read_text())["classes"]) == 8


def test_cli_inline_json_and_flags_before_verb(capsys):
    code, out, _ = run(capsys, "--pretty", "chambers", "verify-c0", "-i", json.dumps(GT12))
    assert code == 0 and "iv: True" in out


def test_cli_exit_malformed_json(capsys, files):
    _, _, tmp = files
    bad = tmp / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "enumerate", "-i", str(bad))[0] == 2


def test_cli_exit_schema(capsys):
    assert run(capsys, "enumerate", "-i", '{"kind": "general_type", "ksq": 1, "x": 2}')[0] == 2


def test_cli_exit_unsupported(capsys):
    code, _, err = run(capsys, "enumerate", "-i", '{"kind": "elliptic", "pg": 0, "m1": 2, "m2": 2}')
    assert code == 3 and "unsupported" in err


def test_cli_exit_ambiguous(capsys, tmp_path):
    p = tmp_path / "amb.json"
    p.write_text(json.dumps(ambiguous_set()))
    assert run(capsys, "recover", "-i", str(p))[0] == 4


def test_cli_exit_domain(capsys, files):
    surface, _, _ = files
    code = run(capsys, "chambers", "walls", "-i", str(surface), "--from", json.dumps(K0),
               "--to", json.dumps([6] + [2] * 8 + [1, 1]))[0]
    assert code == 5


def test_cli_walls(capsys, files):
    surface, _, _ = files
    code, out, _ = run(capsys, "chambers", "walls", "-i", str(surface), "--from", json.dumps(K0),
                       "--to", json.dumps(["3"] + ["1"] * 8 + ["3/5", "3/5"]))
    assert code == 0 and json.loads(out)["walls"][0]["parameter"] == "5/6"


def test_cli_check_diffeo_identity(capsys, files):
    _, bset, _ = files
    code, out, _ = run(capsys, "check-diffeo", "-i", str(bset), "--second", str(bset))
    assert code == 0 and json.loads(out)["verdict"] == "PASS"


def test_cli_check_diffeo_exceptional_reflection(capsys, files):
    _, bset, _ = files
    code, out, _ = run(capsys, "check-diffeo", "-i", str(bset), "--isometry", json.dumps(reflection(E1)))
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "PASS"
    # exceptionals are listed in sorted order, E2 before E1
    assert data["exceptionals"] == [list(E2), list(E1)]
    assert data["permutation"] == [[1, 1], [2, -1]]


def test_cli_check_diffeo_canonical_reflection_fails(capsys, files):
    _, bset, _ = files
    n = add(SL.K0, E1, E2)
    code, out, _ = run(capsys, "check-diffeo", "-i", str(bset), "--isometry", json.dumps(reflection(n)))
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "FAIL"
    assert data["witness"] == list(add(scale(3, SL.K0), scale(2, E1), scale(2, E2)))


def test_cli_check_diffeo_non_isometry(capsys, files):
    _, bset, _ = files
    m = [[2 * int(i == j) for j in range(11)] for i in range(11)]
    assert run(capsys, "check-diffeo", "-i", str(bset), "--isometry", json.dumps(m))[0] == 5


def test_cli_check_summand(capsys, files):
    _, bset, _ = files
    n = add(SL.K0, E1, E2)
    code, out, _ = run(capsys, "check-summand", "-i", str(bset), "--n", json.dumps(list(n)))
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "Contradiction"
    assert data["witness"] == list(add(scale(3, SL.K0), scale(2, E1), scale(2, E2)))
    code, out, _ = run(capsys, "check-summand", "-i", str(bset), "--n", json.dumps(list(E2)))
    data = json.loads(out)
    assert data["verdict"] == "IsExceptional" and data["exceptionals"][data["j"] - 1] == list(E2)


def test_cli_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "7", "--pretty")
    assert code == 0
    assert out.splitlines()[0].startswith("[PASS]  7")
