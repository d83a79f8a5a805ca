import io
import json
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from twistcoh.cli import EXIT_CONFIG, EXIT_MATH, EXIT_OK, main

GOLDEN = Path(__file__).parent / "golden"


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


CIRCLE = ["--model", "t1", "--f", "2", "--theta", "i*dt1", "--Dmin", "1", "--Dmax", "3"]


def test_golden_report():
    code, out, _ = run(["cohomology", *CIRCLE, "--expect", "0=1,1=1"])
    assert code == EXIT_OK
    assert out == (GOLDEN / "circle_imaginary_theta.json").read_text(encoding="utf-8")


def test_failed_expectation_exits_one():
    code, out, err = run(["cohomology", *CIRCLE, "--expect", "1=0"])
    assert code == EXIT_MATH
    doc = json.loads(out)
    assert doc["status"] == "fail" and doc["failures"]
    assert "expected 0" in err


@pytest.mark.parametrize("argv", [
    ["cohomology", "--model", "t1", "--f", "cos(t1", "--theta", "dt1"],
    ["cohomology", "--model", "t2", "--f", "1", "--theta", "cos(t2)*dt1"],
    ["cohomology", "--fixture", "no-such-fixture"],
    ["cohomology", "--f", "1", "--theta", "dt1"],
    ["cohomology", "--fixture", "circle-cos", "--Dmin", "5", "--Dmax", "4"],
    ["cohomology", "--fixture", "circle-cos", "--Dmin", "4", "--Dmax", "5"],
    ["verify", "--suite", "nope"],
    ["relative", "--fixture", "circle-cos", "--map", "2;0.3"],
    ["lck", "--model", "t3", "--f", "1", "--theta", "dt3", "--omega", "dt1 ∧ dt2"],
    ["frobnicate"],
])
def test_bad_input_exits_two(argv):
    code, out, err = run(argv)
    assert code == EXIT_CONFIG
    assert out == ""


def test_non_complex_exits_one():
    code, _, err = run(["cohomology", "--model", "t2", "--f", "2 + cos(t1)", "--theta", "dt2",
                        "--operator", "d_theta_f", "--Dmin", "1", "--Dmax", "3"])
    assert code == EXIT_MATH
    assert "d^2" in err


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"model": "t1", "f": "2", "theta": "dt1",
                               "schedule": [1, 2, 3], "expect": "0=0,1=0"}))
    code, out, _ = run(["cohomology", "--config", str(cfg)])
    assert code == EXIT_OK
    assert json.loads(out)["config"]["theta"] == "dt1"
    code, out, _ = run(["cohomology", "--config", str(cfg), "--theta", "i*dt1"])
    assert code == EXIT_MATH
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["cohomology", "--config", str(bad)])[0] == EXIT_CONFIG


def test_out_file(tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(["fixtures", "--out", str(target)])
    assert code == EXIT_OK and out == ""
    doc = json.loads(target.read_text(encoding="utf-8"))
    assert "torus4-lck" in doc["fixtures"]


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "unit-gauge", "--trials", "5", "--seed", "1"],
    ["relative", "--fixture", "circle-doubling"],
    ["twisted", "--fixture", "circle-cos", "--Dmin", "2", "--Dmax", "4"],
    ["mv", "--fixture", "circle-halves"],
    ["lck", "--fixture", "torus2-lck-exact", "--Dmin", "2", "--Dmax", "4"],
])
def test_commands_are_deterministic(argv):
    first, second = run(argv), run(argv)
    assert first[0] == EXIT_OK, first[2]
    assert first == second
    doc = json.loads(first[1])
    assert doc["status"] == "ok" and doc["engine_version"]


def test_version_flag():
    assert run(["--version"])[0] == EXIT_OK
