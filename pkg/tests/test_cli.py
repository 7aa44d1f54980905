import json
import math
import subprocess
import sys

import pytest

from conftest import load_fixture
from golden import FIX, GOLDEN, run


def result(name):
    code, rep, _, _ = run(GOLDEN[name])
    assert code == 0, rep
    return rep["result"]


def test_report_shape():
    code, rep, text, _ = run(GOLDEN["gm-w"])
    assert code == 0
    assert text.count("\n") == 1
    for key in ("command", "input_digest", "config", "result", "wall_time", "seed"):
        assert key in rep
    assert rep["input_digest"].startswith("sha256:")


def test_gm_builders():
    assert result("gm-w")["G"] == pytest.approx(2 / 3, abs=1e-12)
    assert result("gm-ghz4")["G"] == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert result("gm-ghz5-power")["G"] == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert result("gm-qutrit")["G"] == pytest.approx(2 / 3, abs=1e-12)
    assert result("gm-w-file-embed")["G"] == pytest.approx(2 / 3, abs=1e-9)


def test_spectrum():
    w = result("spectrum-w")
    assert len(w["pairs"]) == 2
    assert {round(p["lambda"], 12) for p in w["pairs"]} == {0.0, round(2 / 3, 12)}
    assert all("residual" in p and "x" in p for p in w["pairs"])
    zero = result("spectrum-zero")
    assert zero["pairs"] == [{"lambda": 0.0, "x": [1.0, 0.0], "residual": 0.0}]
    assert len(result("spectrum-qutrit")["pairs"]) == 7


def test_spectrum_capability(tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"order": 3, "dims": [4, 4, 4], "symmetrize": True,
                             "entries": [{"idx": [1, 2, 3], "value": 1}]}))
    code, rep, _, err = run(["spectrum", str(p)])
    assert code == 3
    assert "power" in rep["error"]["message"] and "power" in err


def test_power():
    r = result("power-w")
    assert r["radius"] == pytest.approx(2 / 3, abs=1e-12)
    assert "shift below guaranteed bound" in result("power-w-small-alpha")["audit"]["flags"]
    oracle = load_fixture("random444.json")["oracle"]["radius"]
    assert result("power-random444")["radius"] == pytest.approx(oracle, abs=5e-4)


def test_power_trace():
    code, rep, _, _ = run(["power", str(FIX / "w_tensor.json"), "--restarts", "2", "--trace"])
    assert code == 0
    for t in rep["result"]["audit"]["traces"]:
        lams = t["lambdas"]
        assert all(b >= a - 1e-12 for a, b in zip(lams, lams[1:]))


def test_validate():
    checks = {c["check"]: c["ok"] for c in result("validate-w-state")["checks"]}
    assert all(checks.values())
    code, rep, _, _ = run(GOLDEN["validate-negative"])
    assert code == 2
    assert not {c["check"]: c["ok"] for c in rep["result"]["checks"]}["nonnegative"]
    assert result("validate-qutrit")["structure"] == "reducible"


@pytest.mark.parametrize("argv", [
    ["gm"],
    ["gm", "--builder", "dicke", "--m", "3"],
    ["gm", "--builder", "qutrit-ghz", "--abc", "1/2,1/2,1/2"],
    ["gm", str(FIX / "w_tensor.json")],
    ["power", str(FIX / "negative_tensor.json")],
    ["power", str(FIX / "w_tensor.json"), "--alpha", "-1"],
    ["spectrum", str(FIX / "missing.json")],
])
def test_validation_exit_code(argv):
    code, rep, _, _ = run(argv)
    assert code == 2 and rep["error"]["type"].endswith("Error")


def test_seed_env(monkeypatch):
    monkeypatch.setenv("GEOMEASURE_SEED", "41")
    _, rep, _, _ = run(["power", str(FIX / "w_tensor.json"), "--restarts", "2"])
    assert rep["seed"] == 41 and rep["result"]["audit"]["seed"] == 41
    monkeypatch.setenv("GEOMEASURE_SEED", "x")
    code, _, _, _ = run(["power", str(FIX / "w_tensor.json")])
    assert code == 2


def test_pretty_goes_to_stderr():
    code, rep, text, err = run(["gm", "--builder", "w", "--pretty"])
    assert code == 0 and "G = 0.666666666667" in err
    json.loads(text)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "geomeasure", "gm", "--builder", "ghz", "--m", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["G"] == pytest.approx(1 / math.sqrt(2))
