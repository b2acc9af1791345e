import json

import numpy as np
import pytest

from atomcalc.constructions import triangular, triangular_modules, truncated_polynomial
from atomcalc.core.iso import is_isomorphic
from atomcalc.modelfile import ModelError, dumps, fixture_path, load, loads, parse_field

from conftest import F2, QQ

FIXTURES = ["triangular_f2", "triangular_q", "kx2_f2", "kx3_f3", "f4_over_f2", "group_c2_f2"]


def tri_doc():
    return json.loads(fixture_path("triangular_f2.json").read_text())


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_load(name):
    model = load(name)
    assert model.algebra.dim >= 2
    assert len(model.sha256) == 64


def test_triangular_fixture_contents():
    model = load("triangular_f2.json")
    assert model.algebra.dim == 3
    assert sorted(model.modules) == ["H", "S1", "S2"]
    ref = triangular_modules(model.algebra)
    for name in ("S1", "S2", "H"):
        assert is_isomorphic(model.modules[name], ref[name])


def test_base_ring_fixture():
    model = load("kx2_f2")
    assert model.base_ring.dim == 2
    assert sorted(model.base_modules) == ["R", "V", "rad"]
    assert model.central_map.shape == (2, 6)


@pytest.mark.parametrize("spec,p", [("F_2", 2), ("F3", 3), ("GF(5)", 5), ("Q", None), (7, 7)])
def test_parse_field(spec, p):
    assert parse_field(spec).p == p


@pytest.mark.parametrize("spec", ["F_4", "R", "", None])
def test_parse_field_rejects(spec):
    with pytest.raises(ModelError):
        parse_field(spec)


def test_bad_json_reports_position():
    with pytest.raises(ModelError, match="line 1"):
        loads("{not json")


def test_non_associative_constants_name_the_triple():
    doc = tri_doc()
    doc["algebra"]["constants"].append([1, 1, 1, 1])
    with pytest.raises(ModelError, match=r"associativity fails at basis indices \(1, 0, 1\)"):
        loads(json.dumps(doc))


def test_unit_must_act_as_identity():
    doc = tri_doc()
    doc["modules"]["S1"]["action"][0] = [[0]]
    with pytest.raises(ModelError, match="'S1'"):
        loads(json.dumps(doc))


def test_action_must_be_multiplicative():
    doc = tri_doc()
    doc["modules"]["H"]["action"][1] = [[0, 0], [0, 1]]
    with pytest.raises(ModelError, match="'H'"):
        loads(json.dumps(doc))


@pytest.mark.parametrize("mutate,needle", [
    (lambda d: d["algebra"].pop("unit"), "needs"),
    (lambda d: d["algebra"].update(dim=0), "positive"),
    (lambda d: d["algebra"]["constants"].append([0, 0, 9, 1]), "out of range"),
    (lambda d: d["algebra"]["constants"].append([0, 0, 1]), r"\[i, j, k, value\]"),
    (lambda d: d["modules"]["S1"].update(action=[[[1]]]), "one matrix per"),
    (lambda d: d["modules"]["H"]["action"].__setitem__(0, [[1, 0]]), "2x2"),
    (lambda d: d["modules"]["S1"]["action"].__setitem__(0, [[1.5]]), "bad scalar"),
])
def test_malformed_files(mutate, needle):
    doc = tri_doc()
    mutate(doc)
    with pytest.raises(ModelError, match=needle):
        loads(json.dumps(doc))


def test_rational_scalars():
    a = triangular(truncated_polynomial(QQ, 1))
    text = dumps(a, triangular_modules(a))
    doc = json.loads(text)
    doc["modules"]["S1"]["action"][0] = [["2/2"]]
    assert loads(json.dumps(doc)).modules["S1"].action[0].tolist() == [[1]]


def test_round_trip_is_stable():
    model = load("kx2_f2")
    text = dumps(model.algebra, model.modules, model.base_factors, model.base_modules, model.central_map)
    again = loads(text)
    assert np.array_equal(again.algebra.constants(), model.algebra.constants())
    assert dumps(again.algebra, again.modules, again.base_factors, again.base_modules,
                 again.central_map) == text


def test_bundled_fixtures_are_canonical_dumps():
    model = load("triangular_f2")
    text = fixture_path("triangular_f2.json").read_text()
    assert dumps(model.algebra, model.modules) == text


def test_missing_file():
    with pytest.raises(ModelError):
        load("/nonexistent/model.json")


def test_f2_fixture_field():
    assert load("group_c2_f2").field == F2
