import csv
import io
import subprocess
import sys

import pytest

from qspir.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------
# rates
# ---------------------------------------------------------

def test_rates_anchor_row(capsys):
    code, out, _ = run_cli(capsys, "rates", "--model", "xeutspir", "--N", "8",
                           "--X", "3", "--T", "2", "--E", "1", "--U", "1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    r = rows[0]
    assert r["regime"] == "1"
    assert (r["rate_num"], r["rate_den"]) == ("1", "2")


def test_rates_grid_and_all_models(capsys):
    code, out, _ = run_cli(capsys, "rates", "--model", "all", "--N", "4,5",
                           "--X", "0,1", "--T", "1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3 * 2 * 2
    assert {r["model"] for r in rows} == {
        "xeutspir", "xbeutspir-static", "xbeutspir-dynamic"}


def test_rates_csv_is_byte_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _, _ = run_cli(capsys, "rates", "--model", "all", "--N",
                             "2,3,4,5,6", "--X", "0,1", "--T", "0,1,2",
                             "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r\n" in a.read_bytes()  # RFC-4180 line endings


def test_infeasible_combination_row_shape(capsys):
    code, out, _ = run_cli(capsys, "rates", "--model", "xeutspir", "--N", "4",
                           "--X", "2", "--T", "2")
    assert code == 0
    r = next(csv.DictReader(io.StringIO(out)))
    assert r["regime"] == "0"  # infeasible combinations keep the row shape
    assert (r["rate_num"], r["rate_den"]) == ("0", "1")
    assert (r["L1"], r["L2"]) == ("0", "0")


# ---------------------------------------------------------
# simulate
# ---------------------------------------------------------

def test_simulate_reports_measured_rate(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--model", "xeutspir", "--N",
                           "8", "--X", "3", "--T", "2", "--E", "1", "--U",
                           "1", "--trials", "10", "--seed", "5")
    assert code == 0
    r = next(csv.DictReader(io.StringIO(out)))
    assert r["trials"] == "10" and r["failures"] == "0"
    assert (r["measured_rate_num"], r["measured_rate_den"]) == ("1", "2")


def test_simulate_byzantine_histogram(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--model", "xbeutspir-static",
                           "--N", "10", "--X", "2", "--T", "2", "--U", "1",
                           "--B", "1", "--trials", "8", "--seed", "3",
                           "--strategy", "storage-leak")
    assert code == 0
    r = next(csv.DictReader(io.StringIO(out)))
    assert r["failures"] == "0"
    assert r["accepted_byzantine_sets_histogram"]  # non-empty label:count list


def test_simulate_over_threat_placement_fails(capsys):
    # two Byzantine servers against a B=1 design: decode failures expected
    code, out, _ = run_cli(capsys, "simulate", "--model", "xbeutspir-static",
                           "--N", "10", "--X", "2", "--T", "2", "--U", "0",
                           "--B", "1", "--trials", "4", "--seed", "1",
                           "--strategy", "additive-random",
                           "--byzantine", "0,5")
    assert code == 1
    r = next(csv.DictReader(io.StringIO(out)))
    assert int(r["failures"]) > 0


def test_simulate_workers_match_serial(tmp_path, capsys):
    outs = []
    for workers in ("1", "3"):
        path = tmp_path / f"w{workers}.csv"
        code, _, _ = run_cli(capsys, "simulate", "--model", "xeutspir", "--N",
                             "6", "--X", "1", "--T", "1", "--U", "1",
                             "--trials", "12", "--seed", "11", "--workers",
                             workers, "--out", str(path))
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_simulate_explicit_sets_and_determinism(capsys):
    args = ("simulate", "--model", "xbeutspir-dynamic", "--N", "7", "--X",
            "1", "--T", "1", "--E", "1", "--B", "1", "--q", "11", "--trials",
            "6", "--seed", "9", "--strategy", "query-relay", "--eaves-up",
            "0", "--eaves-down", "6", "--byzantine", "6")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


# ---------------------------------------------------------
# audit
# ---------------------------------------------------------

def test_audit_default_suite_passes(capsys):
    code, out, _ = run_cli(capsys, "audit", "--default-suite")
    assert code == 0
    assert out.count("pass") >= 6


def test_audit_break_flag_fails_only_that_lemma(capsys):
    code, out, _ = run_cli(capsys, "audit", "--default-suite",
                           "--break-query")
    assert code == 1
    lines = [l for l in out.splitlines() if l.startswith("query-privacy")]
    assert lines and "fail" in lines[0]
    assert out.count("fail") == 1


def test_audit_csv_rows_have_no_wall_time(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _, _ = run_cli(capsys, "audit", "--default-suite", "--out",
                             str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(io.StringIO(a.read_text())))
    assert [r["lemma"] for r in rows] == [
        "storage-security", "query-privacy", "masking-vs-byzantine",
        "masking-vs-user", "symmetric-privacy", "eavesdropper"]
    assert all(r["status"] == "pass" for r in rows)


def test_audit_single_config_runs_each_lemma(capsys):
    code, out, _ = run_cli(capsys, "audit", "--model", "xeutspir", "--N", "3",
                           "--X", "0", "--T", "1", "--E", "1", "--U", "1",
                           "--q", "5")
    assert code == 0
    assert "eavesdropper" in out


# ---------------------------------------------------------
# config file, exit codes, selftest
# ---------------------------------------------------------

def test_config_file_merges_under_flags(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("model = xeutspir\nN = 8\nX = 3\nT = 2\nE = 1\nU = 1\n")
    code, out, _ = run_cli(capsys, "rates", "--config", str(cfg))
    r = next(csv.DictReader(io.StringIO(out)))
    assert (code, r["N"], r["rate_num"]) == (0, "8", "1")
    # explicit flag beats the file
    code, out, _ = run_cli(capsys, "rates", "--config", str(cfg), "--X", "0")
    r = next(csv.DictReader(io.StringIO(out)))
    assert r["X"] == "0"


def test_config_file_unknown_key_is_a_usage_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("NN = 8\n")
    code, _, err = run_cli(capsys, "rates", "--config", str(cfg))
    assert code == 2


def test_usage_error_exits_2(capsys):
    assert run_cli(capsys, "rates", "--N", "four")[0] == 2
    assert run_cli(capsys, "no-such-command")[0] == 2


def test_invalid_scheme_reports_error_exit_2(capsys):
    code, _, err = run_cli(capsys, "simulate", "--model", "xeutspir", "--N",
                           "4", "--X", "1", "--T", "1", "--q", "6",
                           "--trials", "1")
    assert code == 2
    assert err.strip()


def test_selftest_passes(capsys):
    code, out, _ = run_cli(capsys, "selftest")
    assert code == 0
    assert "FAIL" not in out


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "qspir.cli", "rates", "--model", "xeutspir",
         "--N", "8", "--X", "3", "--T", "2", "--E", "1", "--U", "1"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "1,2" in proc.stdout.replace("\r", "")
