from __future__ import annotations

import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from diffop_forge.cli import main

SCHEMA = json.loads(resources.files("diffop_forge").joinpath("schema/output.schema.json").read_text())
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)
CUBIC = "x^3+y^3+z^3"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    data = json.loads(out)
    VALIDATOR.validate(data)
    return code, data


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


def test_validate(capsys):
    code, data = run_json(capsys, "validate", "--f", CUBIC)
    assert code == 0 and data["valid"] and data["d"] == 3
    assert data["groebner_basis"]["generators"] == ["x^2", "y^2", "z^2"]


@pytest.mark.parametrize("f", ["x^3", "x^2*y", "x^4+y^4", "x^3+y^2", "x^2+y^2+z^2", "x^^3"])
def test_validate_rejects(capsys, f):
    code, data = run_json(capsys, "validate", "--f", f)
    assert code == 2 and data["valid"] is False
    assert data["error"]["kind"] == "input"


def test_validate_from_file(capsys, tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("x^3*y+y^3*z+z^3*x\n")
    code, data = run_json(capsys, "validate", "--file", str(path))
    assert code == 0 and data["d"] == 4
    assert main(["validate", "--file", str(tmp_path / "missing.txt")]) == 2


def test_missing_f_is_input_error(capsys):
    assert main(["validate"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["validate", "--f", CUBIC, "--order", "4"])
    assert info.value.code == 2


@pytest.mark.parametrize("order, count", [(1, 5), (2, 12), (3, 22)])
def test_generators(capsys, order, count):
    code, data = run_json(capsys, "generators", "--f", "x^4+y^4+z^4", "--order", str(order))
    assert code == 0 and data["count"] == count
    assert all(g["verified"] for g in data["generators"])
    audit = data["division_audit"]
    assert audit["calls"] == audit["verified"]


def test_order_one_names(capsys):
    _, data = run_json(capsys, "generators", "--f", "x^3+y^3+z^3+x*y*z", "--order", "1")
    assert [g["name"] for g in data["generators"]] == ["1", "E", "H_yz", "H_zx", "H_xy"]


@pytest.mark.parametrize("target", ["D1", "D2", "D3", "S2", "S3"])
def test_resolution(capsys, target):
    code, data = run_json(capsys, "resolution", "--f", CUBIC, "--target", target, "--upto", "2")
    assert code == 0 and data["resolution"]["name"] == target


def test_betti_d2_cubic(capsys):
    code, data = run_json(capsys, "betti", "--f", CUBIC, "--target", "D2", "--upto", "1")
    assert code == 0 and data["matches"]
    row0 = {e["j"]: e["beta"] for e in data["computed"] if e["i"] == 0}
    assert row0 == {0: 3, 1: 9}
    assert any("beta_0,1" in n for n in data["coincidences"])


def test_betti_d3_quartic(capsys):
    code, _ = run_json(capsys, "betti", "--f", "x^4+y^4+z^4", "--target", "D3")
    assert code == 0


def test_betti_d1_reports_closed_form_mismatch(capsys):
    code, data = run_json(capsys, "betti", "--f", "x^4+y^4+z^4", "--target", "D1", "--upto", "2")
    assert code == 1 and not data["matches"]
    assert data["matches_corrected"]


def test_verify_all(capsys):
    code, data = run_json(capsys, "verify", "--f", CUBIC)
    assert code == 0 and data["passed"]
    assert [s["name"] for s in data["suites"]] == ["A", "B", "C", "D", "EF", "mf", "complexes", "chainmaps"]


def test_verify_mf_quintic(capsys):
    code, data = run_json(capsys, "verify", "--f", "x^5+y^5+z^5", "--suite", "mf")
    assert code == 0 and data["suites"][0]["total"] == 6


def test_verify_non_isolated_warns(capsys):
    code, data = run_json(capsys, "verify", "--f", "x^4+y^4", "--suite", "A")
    assert data["warnings"] and code in (0, 1)


def test_verify_bad_suite():
    with pytest.raises(SystemExit) as info:
        main(["verify", "--f", CUBIC, "--suite", "A,Q"])
    assert info.value.code == 2


@pytest.mark.parametrize("entry", ["sigma1:0,0", "M1_3:5,7", "A3:4,1", "Z:9,2", "J21:2,3", "eps2:0,0"])
def test_verify_catches_perturbation(capsys, entry):
    code, data = run_json(capsys, "verify", "--f", CUBIC, "--perturb", entry)
    assert code == 1 and not data["passed"]


def test_perturb_out_of_range(capsys):
    code, data = run_json(capsys, "verify", "--f", CUBIC, "--perturb", "sigma1:40,0")
    assert code == 2


def test_export(capsys):
    code, data = run_json(capsys, "export", "--f", "x^3*y+y^3*z+z^3*x", "--order", "2", "--target", "D2")
    assert code == 0 and len(data["generators"]) == 12
    assert len(data["errata"]) == 8 and "M0_3" in data["glossary"]


def test_text_output(capsys):
    code, out = run(capsys, "verify", "--f", CUBIC, "--suite", "mf,chainmaps", "--verbose")
    assert code == 0 and "[mf] 6/6 pass" in out and "all checks pass" in out


def test_deterministic_and_thread_neutral(monkeypatch, capsys):
    _, first = run(capsys, "verify", "--f", "x^3+y^3+z^3+x*y*z", "--format", "json", "--verbose")
    monkeypatch.setenv("DIFFOP_FORGE_THREADS", "4")
    _, second = run(capsys, "verify", "--f", "x^3+y^3+z^3+x*y*z", "--format", "json", "--verbose")
    monkeypatch.setenv("DIFFOP_FORGE_THREADS", "not-a-number")
    _, third = run(capsys, "verify", "--f", "x^3+y^3+z^3+x*y*z", "--format", "json", "--verbose")
    assert first == second == third


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diffop_forge", "validate", "--f", "x^3"], capture_output=True, text=True)
    assert proc.returncode == 2 and "NotIsolated" in proc.stdout
