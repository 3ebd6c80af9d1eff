import json
import math
from pathlib import Path

import numpy as np
import pytest

from su2tomo.cli import main
from su2tomo.formats import read_probability_csv, read_qpd_csv

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"
CONFIGS = sorted(CONFIG_DIR.glob("*.json"))


def run(*argv):
    return main([str(a) for a in argv])


@pytest.mark.parametrize("path", CONFIGS, ids=lambda p: p.stem)
def test_exact_closure_for_bundled_configs(path, tmp_path):
    assert run("simulate", "--config", path, "--shots", 0, "--out", tmp_path) == 0
    probs = sorted(tmp_path.glob("probability*.csv"))
    assert probs
    assert run("reconstruct", "--config", path, "--input", *probs, "--out", tmp_path) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert len(report["blocks"]) == len(probs)
    for block in report["blocks"]:
        assert block["reconstructed"]
        assert block["metrics"]["max_abs_diff"] <= 1e-9
        assert block["metrics"]["fidelity"] >= 1 - 1e-9


def test_sampled_outputs_are_byte_identical(tmp_path):
    cfg = CONFIG_DIR / "coherent_j1_sweep.json"
    names = ("measurement.csv", "probability.csv", "density.json", "multipoles.json", "report.json")
    snapshots = []
    for _ in range(2):
        assert run("simulate", "--config", cfg, "--shots", 200, "--seed", 4, "--out", tmp_path) == 0
        assert run("reconstruct", "--config", cfg, "--input", tmp_path / "measurement.csv",
                   "--out", tmp_path) == 0
        snapshots.append([(tmp_path / n).read_bytes() for n in names])
    assert snapshots[0] == snapshots[1]
    assert run("simulate", "--config", cfg, "--shots", 200, "--seed", 5, "--out", tmp_path) == 0
    assert (tmp_path / "measurement.csv").read_bytes() != snapshots[0][0]


def test_two_mode_sampled_run(tmp_path):
    cfg = CONFIG_DIR / "mach_zehnder_two_mode.json"
    assert run("simulate", "--config", cfg, "--shots", 20000, "--seed", 2, "--out", tmp_path) == 0
    meas = sorted(tmp_path.glob("measurement_j*.csv"))
    assert len(meas) > 1
    assert run("reconstruct", "--config", cfg, "--input", *meas, "--out", tmp_path) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert all(b["reconstructed"] for b in report["blocks"])


def test_qpd_husimi_of_dicke_top(tmp_path, capsys):
    cfg = CONFIG_DIR / "dicke_j1.json"
    assert run("qpd", "--config", cfg, "--s", -1, 0, 1, "--route", "kernel", "--out", tmp_path) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    q = read_qpd_csv(tmp_path / "qpd_s-1.csv")
    np.testing.assert_allclose(q.values, np.cos(q.grid.theta / 2) ** 4, atol=1e-12)
    for s in (-1, 0, 1):
        text = (tmp_path / f"qpd_s{s}.csv").read_text()
        norm = float(text.split("# normalization=")[1].split()[0])
        gap = float(text.split("# route_discrepancy=")[1].split()[0])
        assert norm == pytest.approx(1.0, abs=1e-10) and gap <= 1e-9


def test_qpd_from_density_file(tmp_path):
    cfg = CONFIG_DIR / "mixture_j2_antipodal.json"
    assert run("simulate", "--config", cfg, "--shots", 0, "--out", tmp_path) == 0
    assert run("qpd", "--input", tmp_path / "truth.json", "--s", 0, "--out", tmp_path) == 0
    assert (tmp_path / "qpd_s0.csv").exists()


def test_sweep_command(tmp_path, capsys):
    cfg = CONFIG_DIR / "coherent_j1_sweep.json"
    assert run("sweep", "--config", cfg, "--shots", 0, 100, 1000, 10000, "--seeds", 5, "--out", tmp_path) == 0
    doc = json.loads((tmp_path / "sweep.json").read_text())
    assert [r["shots"] for r in doc["levels"]] == [0, 100, 1000, 10000]
    assert doc["levels"][0]["median"] < 1e-12
    assert -0.7 <= doc["slope"] <= -0.3
    assert "slope" in capsys.readouterr().out


def test_jc_command(tmp_path):
    cfg = CONFIG_DIR / "jc_readout.json"
    assert run("jc", "--config", cfg, "--out", tmp_path) == 0
    doc = json.loads((tmp_path / "jc_populations.json").read_text())
    assert doc["max_abs_error"] <= 1e-6
    pops = tmp_path / "pops.json"
    pops.write_text(json.dumps({"populations": [0, 1, 0, 0, 0, 0, 0]}))
    assert run("jc", "--config", cfg, "--input", pops, "--shots", 10000, "--seed", 1, "--out", tmp_path) == 0
    doc = json.loads((tmp_path / "jc_populations.json").read_text())
    assert doc["max_abs_error"] <= 5e-2


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"frontend": "abstract", "two_j": 2, "state": {"kind": "dicke", "two_mu": 3}}))
    assert run("simulate", "--config", bad, "--out", tmp_path) == 2
    zero = tmp_path / "zero.json"
    zero.write_text(json.dumps({"frontend": "abstract", "two_j": 2, "state": {"kind": "dicke", "two_mu": 0},
                                "readout_two_mu": 0}))
    assert run("simulate", "--config", zero, "--out", tmp_path) == 3
    assert run("reconstruct", "--input", tmp_path / "missing.csv", "--out", tmp_path) == 4
    assert run("simulate", "--config", CONFIG_DIR / "dicke_j1.json", "--out", tmp_path) == 0
    path = tmp_path / "probability.csv"
    lines = path.read_text().splitlines()
    lines[6] = "x,y"
    path.write_text("\n".join(lines) + "\n")
    assert run("reconstruct", "--input", path, "--out", tmp_path) == 4
    with pytest.raises(SystemExit) as info:
        run("simulate")
    assert info.value.code == 2


def test_reconstruct_without_config_reports_no_metrics(tmp_path):
    assert run("simulate", "--config", CONFIG_DIR / "ion_j2.json", "--shots", 0, "--out", tmp_path) == 0
    assert run("reconstruct", "--input", tmp_path / "probability.csv", "--project", "--out", tmp_path) == 0
    block = json.loads((tmp_path / "report.json").read_text())["blocks"][0]
    assert block["physical"] and block["metrics"] == {}
    p = read_probability_csv(tmp_path / "probability.csv")
    assert math.isclose(p.grid.weights.sum(), 4 * math.pi, rel_tol=1e-12)
