"""Command-line interface tests.

Everything drives main(argv) in process and checks exit codes, file
contents, and the JSON report contract. One subprocess test confirms the
installed console script responds.
"""

import json
import subprocess
import sys

import pytest

from linespec.cli import main

COMPONENTS = [
    {"re": 1.0, "im": 0.0, "normalized_freq": 0.1},
    {"re": 0.0, "im": 1.0, "normalized_freq": 0.22},
    {"re": -0.5, "im": 0.5, "normalized_freq": 0.37},
]
REPORT_KEYS = {
    "estimates",
    "sigma2_hat",
    "k_hat",
    "outer_iterations",
    "cost_trace",
    "events",
    "config",
    "seed",
}


def _components_file(tmp_path):
    path = tmp_path / "components.json"
    path.write_text(json.dumps(COMPONENTS))
    return str(path)


def test_simulate_estimate_round_trip(tmp_path, capsys):
    comp = _components_file(tmp_path)
    sig = str(tmp_path / "signal.csv")
    rep = str(tmp_path / "report.json")
    assert main(["simulate", "--n", "32", "--components", comp,
                 "--snr-db", "20", "--seed", "0", "--out", sig]) == 0
    assert main(["estimate", "--in", sig, "--report", rep]) == 0
    capsys.readouterr()

    data = json.loads((tmp_path / "report.json").read_text())
    assert set(data.keys()) == REPORT_KEYS
    assert data["k_hat"] == 3
    assert data["seed"] == 0  # propagated from the signal file metadata
    got = sorted(e["normalized_freq"] for e in data["estimates"])
    for want, have in zip([0.1, 0.22, 0.37], got):
        assert abs(have - want) < 5e-3
    assert data["sigma2_hat"] > 0
    assert len(data["cost_trace"]) > 0
    assert data["config"]["train"]["momentum"] == 0.9
    for event in data["events"]:
        assert event["kind"] in ("merge", "prune")
        assert event["pass"] >= 1


def test_noiseless_round_trip_finds_true_tones(tmp_path, capsys):
    # Without noise the order statistics have no floor to calibrate against
    # and extra low-power nodes survive; the three dominant estimates still
    # pin the true frequencies.
    comp = _components_file(tmp_path)
    sig = str(tmp_path / "clean.csv")
    rep = str(tmp_path / "clean.json")
    assert main(["simulate", "--n", "32", "--components", comp, "--out", sig]) == 0
    assert main(["estimate", "--in", sig, "--report", rep]) == 0
    capsys.readouterr()

    data = json.loads((tmp_path / "clean.json").read_text())
    assert data["k_hat"] >= 3
    dominant = sorted(
        data["estimates"], key=lambda e: -(e["re"] ** 2 + e["im"] ** 2)
    )[:3]
    got = sorted(e["normalized_freq"] for e in dominant)
    for want, have in zip([0.1, 0.22, 0.37], got):
        assert abs(have - want) < 5e-3


def test_simulate_rejects_bad_components(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"re": 1.0}))
    rc = main(["simulate", "--n", "32", "--components", str(bad),
               "--out", str(tmp_path / "x.csv")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_estimate_missing_file_exits_2(tmp_path, capsys):
    rc = main(["estimate", "--in", str(tmp_path / "nope.csv")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_estimate_headerless_csv_exits_2(tmp_path, capsys):
    path = tmp_path / "junk.csv"
    path.write_text("0,1.0,2.0\n1,0.5,0.1\n")
    rc = main(["estimate", "--in", str(path)])
    assert rc == 2
    assert "header" in capsys.readouterr().err


def test_estimate_malformed_row_exits_2(tmp_path, capsys):
    path = tmp_path / "short.csv"
    path.write_text("index,re,im\n0,1.0\n")
    rc = main(["estimate", "--in", str(path)])
    assert rc == 2
    capsys.readouterr()


def test_estimate_without_metadata_has_null_seed(tmp_path, capsys):
    import numpy as np

    n = 32
    tone = 2.0 * np.exp(1j * 2.0 * np.pi * 0.25 * np.arange(n))
    rng = np.random.default_rng(8)
    y = tone + (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * 0.1
    path = tmp_path / "hand.csv"
    lines = ["index,re,im"]
    lines += [f"{i},{float(v.real)!r},{float(v.imag)!r}" for i, v in enumerate(y)]
    path.write_text("\n".join(lines) + "\n")
    rep = str(tmp_path / "hand.json")
    assert main(["estimate", "--in", str(path), "--report", rep]) == 0
    capsys.readouterr()
    data = json.loads((tmp_path / "hand.json").read_text())
    assert data["seed"] is None
    assert data["k_hat"] == 1
    assert abs(data["estimates"][0]["normalized_freq"] - 0.25) < 1e-3


def test_gradcheck_passes_and_detects_bias(capsys):
    assert main(["gradcheck", "--trials", "20"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert main(["gradcheck", "--trials", "20", "--perturb"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_unknown_experiment_name_rejected(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["experiment", "bogus"])
    assert excinfo.value.code == 2
    capsys.readouterr()


def test_experiment_outputs_are_reproducible(tmp_path, capsys):
    d1 = tmp_path / "run1"
    d2 = tmp_path / "run2"
    d1.mkdir()
    d2.mkdir()
    for d in (d1, d2):
        rc = main(["experiment", "roc-prune", "--trials", "50",
                   "--seed", "4600", "--out-dir", str(d)])
        assert rc == 0
    capsys.readouterr()
    for stem in ("roc_prune_one-node.json", "roc_prune_one-node.csv"):
        a = (d1 / stem).read_text()
        b = (d2 / stem).read_text()
        assert a == b
        assert len(a) > 0
    data = json.loads((d1 / "roc_prune_one-node.json").read_text())
    assert data["seeds"] == {"base_seed": 4600, "trials": 50}
    assert len(data["rows"]) == 6


def test_console_script_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "linespec.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "simulate" in proc.stdout and "experiment" in proc.stdout
