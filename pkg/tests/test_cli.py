import json
import subprocess
import sys

import pytest

from giambelli.cli import main

Z = ["--z", "1/2", "--zp", "1/2"]
ZX = Z + ["--xi", "1/4"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_weight(capsys):
    code, data = run_json(capsys, "zmeasure", "weight", *Z, "--lambda", "[2]")
    assert code == 0
    assert data["result"]["weight_n"] == "9/10"
    m = data["manifest"]
    assert m["command"] == "zmeasure weight" and m["version"] and m["timestamp"]
    assert m["parameters"]["z"] == "1/2"


def test_inadmissible_parameters_exit_2(capsys):
    code, data = run_json(capsys, "zmeasure", "weight", "--z", "1", "--zp", "1", "--lambda", "[1]")
    assert code == 2
    assert data["error"]["type"] == "ValueError"


def test_giambelli_check(capsys):
    code, data = run_json(capsys, "zmeasure", "giambelli-check", *ZX, "--max-size", "5")
    assert code == 0
    assert data["result"]["max_residual"] in ("0", 0, 0.0)


def test_expect_fs(capsys):
    code, data = run_json(capsys, "zmeasure", "expect-fs", *ZX, "--mu", "[1]")
    assert code == 0
    assert "1/12" in json.dumps(data["result"])


def test_sample_deterministic_across_threads(capsys):
    _, a = run_json(capsys, "zmeasure", "sample", *ZX, "--count", "20", "--seed", "3")
    _, b = run_json(capsys, "zmeasure", "sample", *ZX, "--count", "20", "--seed", "3", "--threads", "4")
    assert a["result"] == b["result"]
    assert a["manifest"]["seed"] == 3


def test_kernel_eval_and_rho(capsys):
    _, data = run_json(capsys, "kernel", "eval", *ZX, "--x", "1/2", "--y", "1/2")
    assert data["result"]["K"] == pytest.approx(0.0591363363306678, abs=1e-12)
    _, data = run_json(capsys, "kernel", "rho", *ZX, "--points", "[-1/2,1/2]")
    assert data["result"]["rho"] == pytest.approx(0.0581644, abs=1e-6)


def test_kernel_grid_csv(capsys, tmp_path):
    out = tmp_path / "grid.csv"
    code = main(["kernel", "grid", *ZX, "--range=-7/2,7/2", "--format", "csv", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    body = [ln for ln in lines if not ln.startswith("#")]
    assert body[0] == "x,y,K"
    assert len(body) == 65
    assert any(ln.startswith("# manifest") or ln.startswith("# command") for ln in lines)


def test_kernel_bad_point_exit_2(capsys):
    code, data = run_json(capsys, "kernel", "eval", *ZX, "--x", "1/3", "--y", "1/2")
    assert code == 2
    assert "error" in data


def test_jump_and_whittaker(capsys):
    _, data = run_json(capsys, "kernel", "jump-check", *ZX, "--x", "3/2")
    assert float(data["result"]["residual"]) < 1e-10
    _, data = run_json(capsys, "kernel", "whittaker-eval", *Z, "--x", "0.5", "--y", "0.5")
    assert data["result"]["K"] > 0


def test_ope_commands(capsys):
    measure = '{"atoms": [-1, 0, 1], "weights": [1, 1, 1]}'
    _, data = run_json(capsys, "ope", "prob", "--measure", measure, "--N", "2", "--config", "[-1,1]")
    assert data["result"]["probability"] == "2/3"
    _, data = run_json(capsys, "ope", "giambelli-check", "--measure", measure, "--N", "2", "--max-size", "5")
    assert data["result"]["max_residual"] == "0"
    code, _ = run(capsys, "ope", "kernel", "--measure", measure, "--N", "2", "--x", "1/3", "--y", "1")
    assert code == 2


def test_ope_csv_measure(capsys, tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("atom,weight\n1,1\n2,1\n3,2\n5,1\n")
    _, data = run_json(capsys, "ope", "rho", "--measure", str(path), "--N", "2", "--points", "[1,3]", "--method", "residue")
    r = data["result"]
    assert r["brute_force"] == r["cd_kernel"] == r["residue_kernel"] == "2/11"


def test_verify_suite(capsys):
    code, data = run_json(capsys, "verify", "ope")
    assert code == 0
    assert data["result"]["pass"] is True
    assert all(c["pass"] for c in data["result"]["checks"])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "giambelli.cli", "zmeasure", "weight", *Z, "--lambda", "[1,1]"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["result"]["weight_n"] == "1/10"


def test_negative_values_without_equals(capsys):
    _, data = run_json(capsys, "kernel", "eval", *ZX, "--x", "-3/2", "--y", "-3/2")
    assert data["result"]["K"] == pytest.approx(0.00120123070614318, abs=1e-12)
    code, out = run(capsys, "kernel", "grid", *ZX, "--range", "-1/2,1/2", "--format", "csv")
    assert code == 0
    assert len([ln for ln in out.splitlines() if not ln.startswith("#")]) == 5
