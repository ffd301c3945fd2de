"""CLI checks, including rendering a CSV produced by the simulator CLI."""

import shutil
import subprocess
import sys

import pytest

HEADER = "d_lambda,separation_m,delta_aaoa_rad,delta_eaoa_rad,chordal,cmd,seed"


def run_plot(*args):
    return subprocess.run([sys.executable, "-m", "sweepplot.cli", *args],
                          capture_output=True, text=True)


def test_cli_renders_synthetic_csv(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text(HEADER + "\n5,1.0,0.1,0.05,1e-6,0.9,1\n5,2.0,0.2,0.06,2e-6,0.8,1\n")
    out = tmp_path / "fig.png"
    proc = run_plot("--csv", str(p), "--fig", "cmd", "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    assert out.exists()


def test_cli_schema_error(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("separation_m,cmd\n1.0,0.9\n")
    proc = run_plot("--csv", str(p), "--fig", "cmd", "--out", str(tmp_path / "x.png"))
    assert proc.returncode == 1
    assert "missing column 'd_lambda'" in proc.stderr


def test_cli_rejects_unknown_figure(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text(HEADER + "\n")
    proc = run_plot("--csv", str(p), "--fig", "pie", "--out", str(tmp_path / "x.png"))
    assert proc.returncode == 2  # argparse choice error


def test_cli_header_only_succeeds(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text(HEADER + "\n")
    out = tmp_path / "empty.png"
    proc = run_plot("--csv", str(p), "--fig", "angles", "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    assert out.exists()


@pytest.mark.skipif(shutil.which("gscm") is None,
                    reason="simulator CLI not installed")
def test_renders_all_figures_from_simulator_output(tmp_path):
    # consume the simulator strictly through its CLI and CSV contract
    csv_path = tmp_path / "sweep.csv"
    proc = subprocess.run(["gscm", "run", "--out", str(csv_path),
                           "--seed-list", "1,2,3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    for fig in ("angles", "chordal", "cmd"):
        for extra in ([], ["--mean"]):
            out = tmp_path / f"{fig}{'_mean' if extra else ''}.png"
            proc = run_plot("--csv", str(csv_path), "--fig", fig,
                            "--out", str(out), *extra)
            assert proc.returncode == 0, proc.stderr
            assert out.stat().st_size > 0
    # byte-deterministic re-render of the cmd figure
    a, b = tmp_path / "cmd_a.png", tmp_path / "cmd_b.png"
    for out in (a, b):
        assert run_plot("--csv", str(csv_path), "--fig", "cmd",
                        "--out", str(out)).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    # similarity curves approach one as the users meet
    from sweepplot import load_records
    data = load_records(str(csv_path))
    at_contact = data["cmd"][data["separation_m"] <= 1e-9]
    assert at_contact.size and at_contact.min() > 0.99
