import json
import subprocess
import sys

import pytest

from polyparam.cli import main
from polyparam.param import ParamObject
from polyparam.textform import parse_poly


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_residues(capsys):
    code, out, _ = run(capsys, "residues", "--q", "4", "--k", "1", "--reps", "[1],[3]")
    assert code == 0
    obj = json.loads(out)
    p = ParamObject.from_json(obj)
    assert p.vector[0] == parse_poly("4*y1 + 1 - x0^2 + 3*x0^2")
    assert ParamObject.from_json(json.loads(json.dumps(obj))) == p


def test_residues_two_dims_flat_point(capsys):
    code, out, _ = run(capsys, "residues", "--q", "2", "--k", "2", "--reps", "[0,1]")
    assert code == 0
    assert json.loads(out)["vector"]["text"] == ["2*y1", "2*y2+1"]


def test_intersect(capsys):
    code, out, _ = run(capsys, "intersect", "--part", "4:[1]", "--part", "9:[2]")
    assert code == 0
    p = ParamObject.from_json(out)
    assert p.provenance.params["multipliers"] == [45, 28]


def test_check_intval(capsys):
    code, out, _ = run(capsys, "check-intval", "--poly", "1/2*x1^2+1/2*x1")
    assert code == 0 and json.loads(out)["integer_valued"] is True
    code, out, _ = run(capsys, "check-intval", "--poly", "1/2*x1")
    obj = json.loads(out)
    assert obj["integer_valued"] is False and obj["counterexample"] == {"point": [1], "value": "1/2"}


def test_lemma2(capsys):
    code, out, err = run(capsys, "lemma2", "--vector", "1/4*x1^2")
    assert code == 0
    assert "c = 4" in err
    p = ParamObject.from_json(out)
    assert p.provenance.tag == "lemma2"
    code, out, _ = run(capsys, "lemma2", "--vector", "1/2*x1 + 1/4")
    assert json.loads(out)["empty_range"] is True


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--vector", "1/2*x1^2 - 1/2*x1")
    obj = json.loads(out)
    assert obj["moduli"] == [2]
    assert [v["vector"]["text"] for v in obj["vectors"]] == [["2*y1^2-y1"], ["2*y1^2+y1"]]


def test_cofinite_then_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "cofinite", "--exclude", "[[0]]", "-k", "1")
    assert code == 0 and json.loads(out)["stats"]["variables"] == 5
    f = tmp_path / "f.json"
    f.write_text(out)
    code, out, _ = run(capsys, "verify", "coverage", "--param", str(f), "--set",
                       '{"cofinite":{"k":1,"F":[[0]]}}', "--window", "[-20,20]")
    assert code == 0
    rep = json.loads(out)
    assert rep["verdict"] == "pass" and rep["attempted"] == 40 and rep["non_members"] == 1
    code, out1, _ = run(capsys, "verify", "containment", "--param", str(f), "--set",
                        '{"cofinite":{"k":1,"F":[[0]]}}', "--samples", "3000", "--seed", "9")
    code2, out2, _ = run(capsys, "verify", "containment", "--param", str(f), "--set",
                         '{"cofinite":{"k":1,"F":[[0]]}}', "--samples", "3000", "--seed", "9")
    assert code == code2 == 0 and out1 == out2


def test_verify_failure_exit_code(capsys, tmp_path):
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"vars": ["x1"], "components": ["x1"]}))
    code, out, _ = run(capsys, "verify", "containment", "--param", str(f), "--set",
                       '{"residue":{"q":2,"k":1,"reps":[[1]]}}', "--samples", "10")
    assert code == 1 and json.loads(out)["verdict"] == "fail"


def test_verify_undecided_exit_code(capsys):
    param = json.dumps({"vars": ["x1"], "components": ["x1^2"]})
    s = '{"integer_points":{"vector":["1/4*x1^2"],"arg_window":[[-4,4]],"value_window":[[0,4]]}}'
    code, out, _ = run(capsys, "verify", "containment", "--param", param, "--set", s,
                       "--samples", "50", "--bound", "100000")
    rep = json.loads(out)
    assert code == 0 and rep["undecided"] > 0 and rep["verdict"] == "pass"
    s = s.replace("[[0,4]]", "[[100,200]]")
    code, out, _ = run(capsys, "verify", "containment", "--param", param, "--set", s,
                       "--samples", "50", "--bound", "100000")
    assert code == 2 and json.loads(out)["verdict"] == "undecided"


def test_eval(capsys):
    code, out, _ = run(capsys, "residues", "--q", "4", "--reps", "[1],[3]")
    code, out, _ = run(capsys, "eval", "--param", out, "--point", "[1,2]")
    assert code == 0 and json.loads(out)["value"] == [11]


def test_parse_error_exit_code(capsys):
    code, out, err = run(capsys, "check-intval", "--poly", "x1 + * 2")
    assert code == 2 and out == ""
    assert "position 5" in err


def test_bad_prime_power_exit_code(capsys):
    code, _, err = run(capsys, "residues", "--q", "6", "--reps", "[1]")
    assert code == 2 and "prime power" in err


def test_pretty_format(capsys):
    code, out, _ = run(capsys, "check-intval", "--format", "pretty", "--poly", "x1")
    assert out.startswith("{\n  ")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "polyparam", "check-intval", "--poly", "x1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["integer_valued"] is True
