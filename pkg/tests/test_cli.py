from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qtcover.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_eval(capsys):
    code, data = run(capsys, "eval", "--theta", "t", "v*u")
    assert code == 0 and data["result"] == "e(-t)*U(1,1)"


def test_solve_theta(capsys):
    code, data = run(capsys, "solve-theta", "--theta", "t", "--M", "2,0,0,1", "--K", "0")
    assert code == 0 and data["theta_prime_12"] == "t/2"
    code, data = run(capsys, "solve-theta", "--M", "2,0,0,1", "--K", "1")
    assert data["theta_prime_12"] == "1/2 + t/2"


def test_classify(capsys):
    code, data = run(capsys, "classify", "--theta", "t", "--max-index", "2", "--kbound", "0")
    assert code == 0 and data["count"] == len(data["rows"]) == 4
    assert all(r["checks"]["all"] for r in data["rows"])


def test_check_covering(capsys):
    code, data = run(capsys, "check-covering", "--M", "2,0,0,2")
    assert code == 0 and data["checks"]["all"]
    assert data["invariant_factors"] == ["2", "2"]
    code, data = run(capsys, "check-covering", "--M", "2,0,0,1", "--theta-prime", "t/3")
    assert code == 1 and "error" in data


def test_smooth_build(capsys, tmp_path):
    phi = tmp_path / "phi.json"
    phi.write_text(json.dumps({"group": [2], "images": [{"w": [["0", "1/2"], ["0", "0"]], "M": [[-1, 0], [0, -1]]}]}))
    code, data = run(capsys, "smooth-build", "--phi", str(phi))
    assert code == 0 and all(data["checks"].values())
    assert data["picard"][1]["class"]["w"] == [["0", "1/2"], ["0", "0"]]


def test_smooth_build_obstruction(capsys, tmp_path):
    phi = tmp_path / "phi.json"
    phi.write_text(json.dumps({"group": [2], "images": [{"w": [["1/2", "0"], ["0", "1/2"]], "M": [[1, 0], [0, 1]]}]}))
    code, data = run(capsys, "smooth-build", "--phi", str(phi))
    assert code == 1 and data["kind"] == "h3_obstruction"


def test_poset_and_freeness(capsys):
    code, data = run(capsys, "poset", "--n", "1", "--max-index", "4")
    assert code == 0 and data["consistent"] and len(data["nodes"]) == 4
    code, data = run(capsys, "freeness", "--group", "2,2", "--N", "0,0;1,0")
    assert code == 0 and data["free"] is False and data["kernel"] == [[0, 0], [0, 1]]


def test_theta_matrix_file(capsys, tmp_path):
    path = tmp_path / "theta.json"
    path.write_text(json.dumps([["0", "t", "t^2"], ["-t", "0", "t^3"], ["-t^2", "-t^3", "0"]]))
    code, data = run(capsys, "eval", "--theta", str(path), "u3*u1")
    assert code == 0 and data["result"] == "e(-t^2)*U(1,0,1)"


@pytest.mark.parametrize("argv", [
    ["eval", "u*"],
    ["solve-theta", "--M", "1,2,3"],
    ["eval", "--theta", "1/t", "u"],
    ["freeness", "--group", "2,2", "--N", "0"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_errors():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_domain_errors(capsys):
    code, data = run(capsys, "solve-theta", "--M", "1,2,2,4")
    assert code == 1 and data["kind"] == "SingularMatrixError"
    code, data = run(capsys, "eval", "u3")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["classify", "--max-index", "3", "--kbound", "1"],
    ["eval", "(u + e(1/3)*v)^3 - u'"],
    ["poset", "--n", "2", "--max-index", "3"],
])
def test_deterministic_output(argv):
    cmd = [sys.executable, "-m", "qtcover.cli", *argv]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True, env={"QTC_THREADS": "2", "PATH": ""}).stdout
    assert first == second and first
