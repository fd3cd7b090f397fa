import numpy as np
import pytest

from altl1.cli import main


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "inst.txt"
    rc = main(["gen", "--n", "24", "--m", "10", "--k", "2", "--seed", "5", "--out", str(path)])
    assert rc == 0
    return path


def test_gen_writes_instance(instance_file, capsys):
    assert instance_file.exists()
    header = instance_file.read_text().splitlines()[0]
    assert header == "24 10 2"


@pytest.mark.parametrize("method", ["l1", "alt_l1", "reweighted_l1", "irls"])
def test_decode_each_method(instance_file, capsys, method):
    rc = main(["decode", "--instance", str(instance_file), "--method", method])
    captured = capsys.readouterr()
    assert rc == 0
    assert f"method: {method}" in captured.out
    assert "success: yes" in captured.out
    assert "x_hat:" in captured.out


def test_decode_alt_reports_multiplier_and_trace(instance_file, capsys):
    rc = main(["decode", "--instance", str(instance_file), "--method", "alt_l1", "--L", "3"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "u: " in out
    assert len([ln for ln in out.splitlines() if ln.startswith("lagrangian_trace:")]) == 1
    trace_line = next(ln for ln in out.splitlines() if ln.startswith("lagrangian_trace:"))
    assert len(trace_line.split()) == 1 + 4  # label + L+1 values


def test_decode_fixed_u(instance_file, capsys):
    rc = main(["decode", "--instance", str(instance_file), "--method", "alt_l1", "--u", "1.5"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "u: 1.5" in out


def test_certify_command(instance_file, capsys):
    rc = main(["certify", "--instance", str(instance_file), "--k", "2", "--trials", "5"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "rank_condition_holds: yes" in out
    assert "passed: yes" in out


def test_dual_scan_command(instance_file, capsys):
    rc = main(["dual-scan", "--instance", str(instance_file), "--u-grid", "0.5,1,2", "--L", "2"])
    out = capsys.readouterr().out.strip().splitlines()
    assert rc == 0
    assert len(out) == 3
    for line in out:
        u, value = (float(tok) for tok in line.split())
        assert np.isfinite(value)


def test_sweep_command(tmp_path, capsys):
    csv_path = tmp_path / "out.csv"
    svg_path = tmp_path / "out.svg"
    rc = main(
        [
            "sweep",
            "--n", "24", "--m", "10",
            "--k-grid", "1,2",
            "--trials", "2",
            "--methods", "l1,alt_l1",
            "--seed", "3",
            "--csv", str(csv_path),
            "--svg", str(svg_path),
        ]
    )
    out = capsys.readouterr().out
    assert rc == 0
    assert csv_path.exists() and svg_path.exists()
    assert "wrote 8 records" in out
    assert "alt_l1: k=1:" in out


def test_sweep_with_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("n = 24\nm = 10\nk_grid = 1 2\ntrials = 2\nmethods = l1\nseed = 3\n")
    csv_path = tmp_path / "out.csv"
    rc = main(["sweep", "--config", str(cfg), "--trials", "1", "--csv", str(csv_path)])
    out = capsys.readouterr().out
    assert rc == 0
    # CLI --trials overrides the file's 2
    assert "wrote 2 records" in out


def test_missing_instance_is_reported_on_stderr(capsys):
    rc = main(["decode", "--instance", "/nonexistent/path.txt", "--method", "l1"])
    captured = capsys.readouterr()
    assert rc == 1
    assert captured.err.startswith("error:")
    assert captured.err.count("\n") == 1


def test_invalid_config_key_is_reported(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("bogus = 1\n")
    rc = main(["sweep", "--config", str(cfg), "--csv", str(tmp_path / "o.csv")])
    captured = capsys.readouterr()
    assert rc == 1
    assert "unknown config key" in captured.err


def test_unknown_method_rejected_by_parser(instance_file):
    with pytest.raises(SystemExit):
        main(["decode", "--instance", str(instance_file), "--method", "l2"])
