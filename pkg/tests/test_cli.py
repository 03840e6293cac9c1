import json
import subprocess
import sys

import numpy as np
import pytest

from renyi2.cli import main

PI = np.pi


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = text.splitlines()
    header = lines[0].split(",")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    return header, rows


def write_config(path, **overrides):
    cfg = {
        "phi_grid": list(np.linspace(0.0, PI, 9)),
        "shots_per_phase": 2000,
        "visibility": 0.965,
        "background_rate": 0.0,
        "seed": 20260817,
        "detector_model": "number_resolving",
    }
    cfg.update(overrides)
    path.write_text(json.dumps(cfg))
    return path


# -- purity ---------------------------------------------------------------------


def test_purity_singlet_text(capsys):
    code, out, err = run_cli(capsys, "purity", "--state", "singlet")
    assert code == 0 and err == ""
    assert "p_aa=0.250000" in out
    assert "tr rho^2  : reconstructed 1.000000  direct 1.000000" in out
    assert "violated" in out


def test_purity_werner_zero_json(capsys):
    code, out, _ = run_cli(capsys, "purity", "--state", "werner:0", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["purities"]["joint"]["direct"] == pytest.approx(0.25)
    assert payload["purities"]["joint"]["reconstructed"] == pytest.approx(0.25)
    assert payload["witness"]["violated"] is False


def test_purity_at_witness_threshold(capsys):
    code, out, _ = run_cli(capsys, "purity", "--state", "werner:0.57735", "--format", "json")
    assert code == 0
    margins = json.loads(out)["witness"]
    assert abs(margins["margin_a"]) < 1e-4
    assert abs(margins["margin_b"]) < 1e-4


def test_purity_csv_matches_matrix_file_input(capsys, tmp_path):
    code, from_name, _ = run_cli(capsys, "purity", "--state", "singlet", "--format", "csv")
    assert code == 0
    half = 0.5
    mat = [
        [0, 0, 0, 0],
        [0, half, [-half, 0], 0],
        [0, [-half, 0], half, 0],
        [0, 0, 0, 0],
    ]
    f = tmp_path / "state.json"
    f.write_text(json.dumps({"dim_a": 2, "dim_b": 2, "matrix": mat}))
    code, from_file, _ = run_cli(capsys, "purity", "--state", f"file:{f}", "--format", "csv")
    assert code == 0
    header, rows_name = parse_csv(from_name)
    header_f, rows_file = parse_csv(from_file)
    assert header == header_f
    assert header[:4] == ["p_cc", "p_ca", "p_ac", "p_aa"]
    # the named singlet goes through 1/sqrt(2) amplitudes, the file through
    # exact 0.5 entries, so match values rather than bytes
    assert rows_file[0] == pytest.approx(rows_name[0], abs=1e-12)


def test_purity_rejects_unknown_family(capsys):
    code, out, err = run_cli(capsys, "purity", "--state", "ghz")
    assert code != 0
    assert err.startswith("error:") and err.count("\n") == 1
    assert out == ""


def test_purity_rejects_malformed_matrix_file(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    code, _, err = run_cli(capsys, "purity", "--state", f"file:{f}")
    assert code != 0 and "malformed" in err
    f.write_text(json.dumps({"dim_a": 2, "matrix": [[1]]}))
    code, _, err = run_cli(capsys, "purity", "--state", f"file:{f}")
    assert code != 0 and "malformed" in err


# -- werner-scan ------------------------------------------------------------------


def test_werner_scan_reveals_three_regimes(capsys):
    code, out, _ = run_cli(capsys, "werner-scan", "--pmin", "0", "--pmax", "1", "--steps", "21")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["p", "ppt_min_eig", "entropic_margin", "max_chsh"]
    by_p = {round(r[0], 3): r for r in rows}
    p, ppt, margin, chsh = by_p[0.3]
    assert ppt > 0 and margin < 0 and chsh < 2
    p, ppt, margin, chsh = by_p[0.6]
    assert ppt < 0 and margin > 0 and chsh < 2
    p, ppt, margin, chsh = by_p[0.8]
    assert margin > 0 and chsh > 2


def test_werner_scan_json_round_trip(capsys):
    code, out, _ = run_cli(capsys, "werner-scan", "--steps", "3", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert [r["p"] for r in rows] == [0.0, 0.5, 1.0]
    assert out == json.dumps(rows, indent=2, sort_keys=True, allow_nan=False) + "\n"


def test_werner_scan_rejects_bad_range(capsys):
    code, _, err = run_cli(capsys, "werner-scan", "--pmin", "0.9", "--pmax", "0.2")
    assert code != 0 and "bad range" in err
    code, _, err = run_cli(capsys, "werner-scan", "--pmin", "0", "--pmax", "1.5")
    assert code != 0 and "bad range" in err
    code, _, err = run_cli(capsys, "werner-scan", "--steps", "1")
    assert code != 0 and "steps" in err


# -- phase-scan -------------------------------------------------------------------


def test_phase_scan_marked_rows(capsys):
    code, out, _ = run_cli(capsys, "phase-scan", "--grid", f"0:{PI}:3")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["phi", "p_cc", "p_ca", "p_ac", "p_aa"]
    assert rows[0][1:] == pytest.approx([0.6, 0.0, 0.0, 0.4], abs=1e-10)
    assert rows[1][1:] == pytest.approx([0.3, 0.3, 0.3, 0.1], abs=1e-10)
    for row in rows:
        assert sum(row[1:]) == pytest.approx(1.0, abs=1e-10)


def test_phase_scan_uses_lf_endings_and_final_newline(capsys):
    code, out, _ = run_cli(capsys, "phase-scan", "--grid", "0:1.6:4")
    assert code == 0
    assert "\r" not in out and out.endswith("\n")


def test_phase_scan_writes_output_file(capsys, tmp_path):
    target = tmp_path / "curves.csv"
    code, out, _ = run_cli(capsys, "phase-scan", "--grid", "0:1.6:4", "--out", str(target))
    assert code == 0 and out == ""
    header, rows = parse_csv(target.read_text())
    assert header[0] == "phi" and len(rows) == 4


def test_phase_scan_rejects_bad_grids(capsys):
    code, _, err = run_cli(capsys, "phase-scan", "--grid", "0-1-5")
    assert code != 0 and "start:stop:n" in err
    code, _, err = run_cli(capsys, "phase-scan", "--grid", "0:1:0")
    assert code != 0 and "empty" in err


# -- simulate ---------------------------------------------------------------------


def test_simulate_writes_deterministic_outputs(capsys, tmp_path):
    cfg = write_config(tmp_path / "run.json")
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    code, line, _ = run_cli(capsys, "simulate", "--config", str(cfg), "--out", str(out_a))
    assert code == 0
    assert line.startswith("witness violated (significance ")
    code, _, _ = run_cli(capsys, "simulate", "--config", str(cfg), "--out", str(out_b))
    assert code == 0
    assert (out_a / "report.json").read_bytes() == (out_b / "report.json").read_bytes()
    assert (out_a / "counts.csv").read_bytes() == (out_b / "counts.csv").read_bytes()

    report = json.loads((out_a / "report.json").read_text())
    assert set(report) == {"config", "counts", "fits", "witness"}
    assert set(report["fits"]) == {"p_ac", "p_aa"}
    canonical = json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
    assert canonical.encode() == (out_a / "report.json").read_bytes()

    header, rows = parse_csv((out_a / "counts.csv").read_text())
    assert header == ["phi", "n_cc", "n_ca", "n_ac", "n_aa", "n_other"]
    assert len(rows) == 9
    assert all(sum(r[1:]) == 2000 for r in rows)


def test_simulate_seed_flag_overrides_config(capsys, tmp_path):
    cfg = write_config(tmp_path / "run.json")
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    run_cli(capsys, "simulate", "--config", str(cfg), "--out", str(out_a))
    run_cli(capsys, "simulate", "--config", str(cfg), "--out", str(out_b), "--seed", "1")
    rep_a = json.loads((out_a / "report.json").read_text())
    rep_b = json.loads((out_b / "report.json").read_text())
    assert rep_b["config"]["seed"] == 1
    assert rep_a["counts"] != rep_b["counts"]


def test_simulate_flat_config_reports_no_violation(capsys, tmp_path):
    cfg = write_config(tmp_path / "run.json", visibility=0.0)
    code, line, _ = run_cli(capsys, "simulate", "--config", str(cfg), "--out", str(tmp_path / "o"))
    assert code == 0
    assert line.startswith("witness not violated")


def test_simulate_config_validation_messages(capsys, tmp_path):
    cfg = write_config(tmp_path / "run.json", visibility=2.0)
    code, _, err = run_cli(capsys, "simulate", "--config", str(cfg), "--out", str(tmp_path / "o"))
    assert code != 0 and "visibility" in err

    cfg = write_config(tmp_path / "run2.json", extra_knob=1)
    code, _, err = run_cli(capsys, "simulate", "--config", str(cfg), "--out", str(tmp_path / "o"))
    assert code != 0 and "unknown config field" in err and "extra_knob" in err

    partial = tmp_path / "run3.json"
    partial.write_text(json.dumps({"shots_per_phase": 100}))
    code, _, err = run_cli(capsys, "simulate", "--config", str(partial), "--out", str(tmp_path / "o"))
    assert code != 0 and "phi_grid" in err

    broken = tmp_path / "run4.json"
    broken.write_text("{oops")
    code, _, err = run_cli(capsys, "simulate", "--config", str(broken), "--out", str(tmp_path / "o"))
    assert code != 0 and "malformed config" in err

    code, _, err = run_cli(capsys, "simulate", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o"))
    assert code != 0 and err.startswith("error:")


# -- entry point -------------------------------------------------------------------


def test_module_entry_point_help():
    proc = subprocess.run(
        [sys.executable, "-m", "renyi2", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    for name in ("purity", "werner-scan", "phase-scan", "simulate"):
        assert name in proc.stdout
