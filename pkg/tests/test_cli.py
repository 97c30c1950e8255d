import json
import subprocess
import sys

import pytest

from heavytail_rmt.harness.cli import main

pytestmark = pytest.mark.filterwarnings("ignore:degenerate pooling")


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    cfg = out / "exp.cfg"
    cfg.write_text("ensemble = wigner\nalpha = 1.0\nn = 25\nreplicates = 6\nseed = 3\n")
    assert main(["run", "--config", str(cfg), "--replicates", "8", "--out", str(out)]) == 0
    return out


def test_run_writes_outputs(run_dir, capsys):
    for name in ("records.jsonl", "summary.json", "summary.csv", "summary_intervals.csv",
                 "frechet_plot.tsv"):
        assert (run_dir / name).exists(), name
    summary = json.loads((run_dir / "summary.json").read_text())
    assert summary["replicates"] == 8 and summary["config"]["seed"] == 3


def test_gof_recomputes(run_dir, capsys):
    capsys.readouterr()
    assert main(["gof", str(run_dir / "records.jsonl"), "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    saved = json.loads((run_dir / "summary.json").read_text())
    assert out["ks_statistic"] == saved["ks_statistic"]
    assert out["maxima"] == saved["maxima"]


def test_report_formats(run_dir, tmp_path, capsys):
    assert main(["report", str(run_dir / "records.jsonl"), "--out", str(tmp_path),
                 "--format", "plotdata", "--format", "jsonl"]) == 0
    assert (tmp_path / "frechet_plot.tsv").read_text() == (run_dir / "frechet_plot.tsv").read_text()
    assert (tmp_path / "records.jsonl").read_text() == (run_dir / "records.jsonl").read_text()


def test_sample_tail(capsys):
    assert main(["sample-tail", "--alpha", "1.5", "--count", "200000", "--seed", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["count"] == 200000
    for row in out["exceedance"]:
        assert abs(row["z"]) < 5
    assert abs(out["positive_fraction"] - 0.5) < 0.01


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--alpha", "5"],
        ["run", "--alpha", "2.5", "--symmetry", "positive"],
        ["run", "--n", "ten"],
        ["run", "--intervals", "2:1"],
    ],
)
def test_bad_config_exit_code(argv, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_missing_records_file(tmp_path, capsys):
    assert main(["gof", str(tmp_path / "nope.jsonl")]) == 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "heavytail_rmt", "run", "--alpha", "9", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode != 0 and "alpha" in proc.stderr
