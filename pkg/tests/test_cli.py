import json
import subprocess
import sys

import pytest

from atomcalc.cli import main
from atomcalc.modelfile import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out) if out else None, err


def test_main_theorem_on_triangular(capsys):
    code, rep, _ = run_json(capsys, "verify", "main-theorem", "triangular_f2.json")
    assert code == 0 and rep["status"] == "ok"
    s1 = rep["result"]["modules"]["S1"]
    assert s1["mu"][:3] == [{"S1": 1, "S2": 0}, {"S1": 0, "S2": 1}, {"S1": 0, "S2": 0}]
    assert s1["mu"] == s1["ext"]


def test_atomic_object_of_s1(capsys):
    code, rep, _ = run_json(capsys, "atomic-object", "--atom", "S1", "triangular_f2.json")
    assert code == 0
    res = rep["result"]
    assert res["dim"] == 2 and res["isomorphic_to"] == ["H"]
    assert res["monoform"] == "monoform" and res["residue_field"]["degree"] == 1


def test_row_module_equations_from_file(capsys):
    code, out, _ = run(capsys, "verify", "noeth-final-example", "kx2_f2.json", "--module", "V")
    assert code == 0
    for eq in ("mu_0(P1, M) = mu_0(p, V)", "mu_0(P2, M) = 0", "mu_1(P1, M) = mu_1(p, V)",
               "mu_1(P2, M) = mu_0(p, V)"):
        assert eq in out


@pytest.mark.parametrize("module,tuple_", [("V", [1, 0, 1, 1]), ("R", [1, 0, 0, 1]), ("rad", [1, 0, 1, 1])])
def test_row_module_equations_json(capsys, module, tuple_):
    fixture = "kx2_f2" if module != "rad" else "kx3_f3"
    code, rep, _ = run_json(capsys, "verify", "noeth-final-example", fixture, "--module", module)
    assert code == 0 and rep["result"]["tuple"] == tuple_


def test_aspec(capsys):
    code, rep, _ = run_json(capsys, "aspec", "f4_over_f2")
    assert code == 0
    (atom,) = rep["result"]["atoms"]
    assert atom["residue_field"]["name"] == "F_2^2"


def test_bass_and_asupp(capsys):
    code, rep, _ = run_json(capsys, "bass", "triangular_f2", "--module", "S1")
    assert code == 0 and rep["result"]["completion"] == {"kind": "exact_zero_tail", "zero_from": 2}
    code, rep, _ = run_json(capsys, "asupp", "triangular_f2", "--module", "H")
    assert code == 0
    assert rep["result"]["asupp"] == ["S1"] and rep["result"]["completeness"] == "complete"


def test_resolve(capsys):
    code, rep, _ = run_json(capsys, "resolve", "triangular_f2", "--module", "S2", "--projective")
    assert code == 0 and rep["result"]["term_dims"] == [2, 1]


def test_monoform_both_methods(capsys):
    code, rep, _ = run_json(capsys, "monoform", "group_c2_f2", "--module", "kC2", "--method", "both")
    assert code == 0
    res = rep["result"]
    assert {res[k]["verdict"] for k in ("socle_criterion", "exhaustive")} == {"uniform_only"}
    assert all(res[k]["verified"] for k in res)


@pytest.mark.parametrize("what", ["classification", "closure"])
def test_other_verifiers(capsys, what):
    code, rep, _ = run_json(capsys, "verify", what, "triangular_f2")
    assert code == 0, rep


def test_json_output_is_deterministic(capsys):
    first = run(capsys, "verify", "main-theorem", "kx2_f2", "--format", "json")[1]
    second = run(capsys, "verify", "main-theorem", "kx2_f2", "--format", "json")[1]
    assert first == second
    rep = json.loads(first)
    assert {"command", "model_sha256", "degree_bound", "seed", "budget", "status", "result"} <= set(rep)


def test_truncation_gives_exit_three(capsys):
    code, rep, _ = run_json(capsys, "verify", "closure", "kx2_f2", "--module", "N", "--budget", "2")
    assert code == 3 and "budget" in rep["error"]


def test_bad_json_exit_two(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{")
    code, _, err = run(capsys, "aspec", str(p))
    assert code == 2 and "invalid JSON" in err


def test_non_associative_exit_two(tmp_path, capsys):
    doc = json.loads(fixture_path("triangular_f2.json").read_text())
    doc["algebra"]["constants"].append([1, 1, 1, 1])
    p = tmp_path / "nonassoc.json"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "aspec", str(p))
    assert code == 2 and "(1, 0, 1)" in err


def test_bad_module_exit_two(tmp_path, capsys):
    doc = json.loads(fixture_path("triangular_f2.json").read_text())
    doc["modules"]["H"]["action"][0] = [[1, 0], [0, 0]]
    doc["modules"]["H"]["action"][2] = [[0, 0], [0, 0]]
    p = tmp_path / "badmod.json"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "aspec", str(p))
    assert code == 2 and "'H'" in err


@pytest.mark.parametrize("argv", [
    ["atomic-object", "triangular_f2"],
    ["atomic-object", "--atom", "S9x", "triangular_f2"],
    ["bass", "triangular_f2", "--module", "nope"],
    ["verify", "noeth-final-example", "triangular_f2", "--module", "V"],
    ["bass", "triangular_f2", "--module", "S1", "--max-degree", "-1"],
    ["frobnicate", "triangular_f2"],
])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "atomcalc", "aspec", "triangular_f2", "--format", "json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "aspec"
