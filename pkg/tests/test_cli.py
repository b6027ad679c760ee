"""Golden-file and exit-code tests for the command line.

Set UPDATE_GOLDEN=1 to rewrite tests/golden/ from the current build.
"""
import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from hypunivalent import cli

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
DATA = HERE / "data"
UPDATE = os.environ.get("UPDATE_GOLDEN") == "1"

CASES = {
    "eval_cubic_z0": ("eval --family cubic --a 1 --b 1 --c 5 --z 0", 0),
    "eval_geometric": ("eval --family generic --upper 1 --z 0.5", 0),
    "eval_quartic_z1": ("eval --family quartic --a 1 --b 1 --c 4 --z 1", 0),
    "eval_not_converged": ("eval --family generic --upper 1 --z 0.999 --max-terms 10", 2),
    "identity_dj": ("identity --family cubic --case dj --a 0 --b 1 --c 3", 0),
    "identity_w1": ("identity --family cubic --case w1 --a 0.2 --b 0.3 --c 3", 0),
    "identity_quartic_w4": ("identity --family quartic --case w4 --a 2 --b 6 --c 10", 0),
    "identity_failed": ("identity --family cubic --case w1 --a 0.2 --b 0.3 --c 3 --tolerance 1e-300", 3),
    "theorem_cubic_mstar": ("theorem --id cubic-mstar --a 0 --b 1 --c 3 --lambda 0 --alpha 1.3", 0),
    "theorem_quartic_nstar": ("theorem --id quartic-nstar --a 0.1 --b 0.1 --c 12 --lambda 0 --alpha 1.333", 0),
    "theorem_rtau": ("theorem --id cubic-rtau-nstar --a 0.1 --b 0.1 --c 10 --alpha 1.3 "
                     "--A 0.2 --B -0.2 --tau 0.5", 0),
    "theorem_corollary": ("theorem --id quartic-mstar --a 0.1 --b 0.1 --c 10 --alpha 1.3 --corollary", 0),
    "theorem_fails": ("theorem --id quartic-rtau-mstar --a 2 --b 6 --c 11 --alpha 1.05 "
                      "--A 0.5 --B -0.5 --tau 0.999", 4),
    "scan_alpha_sweep": ("scan --id cubic-mstar --a 0.5 --b 0.5 --c 3 --lambda 0 "
                         "--grid alpha=1.01:1.33:5", 0),
    "scan_skipped": ("scan --id cubic-mstar --a 0.5 --b 0.5 --lambda 0 --alpha 1.2 "
                     "--grid c=1.5:4:3", 0),
    "disc_identity": (f"verify-disc --coeffs {DATA / 'identity.json'} --class mstar --alpha 1.3333333333333333", 0),
    "disc_boundary": (f"verify-disc --coeffs {DATA / 'boundary.txt'} --class mstar --lambda 0 "
                      "--alpha 1.3333333333333333", 0),
    "disc_violating": (f"verify-disc --coeffs {DATA / 'violating.txt'} --class mstar --lambda 0 "
                       "--alpha 1.3333333333333333", 4),
    "disc_operator": ("verify-disc --family cubic --a 0.1 --b 0.1 --c 10 --class nstar --alpha 1.3 "
                      "--samples 1024", 0),
}


def run(argv, capsys):
    try:
        code = cli.main(argv.split() if isinstance(argv, str) else argv)
    except SystemExit as exc:  # argparse rejects malformed flags this way
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def _golden_text(name, argv, code, out):
    # paths differ between checkouts, so the file stores the argv relative to tests/
    shown = argv.replace(str(HERE) + os.sep, "")
    return f"$ hypunivalent {shown}\n# exit {code}\n{out}"


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    argv, want_code = CASES[name]
    code, out, _ = run(argv, capsys)
    assert code == want_code
    text = _golden_text(name, argv, code, out)
    path = GOLDEN / f"{name}.txt"
    if UPDATE or not path.exists():
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(text)
    assert path.read_text() == text
    code2, out2, _ = run(argv, capsys)
    assert (code2, out2) == (code, out)


def test_subprocess_matches_in_process(capsys):
    argv, _ = CASES["identity_w1"]
    _, out, _ = run(argv, capsys)
    proc = subprocess.run([sys.executable, "-m", "hypunivalent", *argv.split()],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == out


def test_banner_goes_to_stderr(capsys):
    code, out, err = run("-v eval --family generic --upper 1 --z 0.5", capsys)
    assert code == 0 and "hypunivalent" in err
    assert json.loads(out)["value"] == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("argv", [
    "", "eval --family cubic --z 0.5", "eval --family nope --z 0",
    "eval --family generic --upper 1 --z 1",
    "theorem --id cubic-mstar --a 1 --b 1 --c 2 --lambda 0 --alpha 1.3",
    "theorem --id cubic-mstar --a 0 --b 1 --c 3",
    "scan --id cubic-mstar --grid alpha=2:1:3 --a 0 --b 1 --c 3",
    "verify-disc --class mstar --alpha 1.3",
    "eval --family generic --upper 1 --z 0.5 --rel-tol -1",
])
def test_usage_errors_exit_one(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 1 and out == "" and err.startswith(("error", "usage"))


def test_precondition_message_names_constraint(capsys):
    _, _, err = run("theorem --id cubic-mstar --a 1 --b 1 --c 2 --lambda 0 --alpha 1.3", capsys)
    assert "c > |a|+|b|+1" in err


def test_io_errors_exit_five(tmp_path, capsys):
    code, _, _ = run(f"verify-disc --coeffs {tmp_path / 'missing.txt'} --class mstar --alpha 1.3", capsys)
    assert code == 5
    code, _, _ = run(f"scan --id cubic-mstar --a 0 --b 1 --c 3 --alpha 1.3 "
                     f"--out {tmp_path / 'nodir' / 'x.csv'}", capsys)
    assert code == 5


def test_scan_singleton_equals_theorem(capsys):
    _, t_out, _ = run("theorem --id cubic-mstar --a 0.5 --b 0.5 --c 3 --lambda 0.2 --alpha 1.2", capsys)
    _, s_out, _ = run("scan --id cubic-mstar --a 0.5 --b 0.5 --c 3 --lambda 0.2 --alpha 1.2", capsys)
    verdict = json.loads(t_out)
    (row,) = list(csv.DictReader(io.StringIO(s_out)))
    assert row["margin"] == cli.fmt_number(verdict["margin"])
    assert row["holds"] == cli.fmt_number(verdict["holds"])


def test_scan_rows_ordered_and_monotone(capsys):
    _, out, _ = run(CASES["scan_alpha_sweep"][0], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == list(cli.SCAN_COLUMNS)
    alphas = [float(r["alpha"]) for r in rows]
    margins = [float(r["margin"]) for r in rows]
    assert alphas == sorted(alphas) and margins == sorted(margins)


def test_scan_skips_invalid_points(capsys):
    _, out, _ = run(CASES["scan_skipped"][0], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["status"] == "skipped" and "c >" in rows[0]["reason"]
    assert rows[-1]["status"] == "ok"


def test_scan_workers_match_serial(tmp_path, capsys):
    base = "scan --id quartic-mstar --a 0.3 --lambda 0.1 --alpha 1.2 --grid b=0.1:1:3 --grid c=2:5:4"
    _, serial, _ = run(base, capsys)
    _, parallel, _ = run(base + " --workers 2", capsys)
    assert serial == parallel


def test_scan_switches_to_jsonl(monkeypatch, tmp_path, capsys):
    monkeypatch.setattr(cli, "JSONL_THRESHOLD", 2)
    out_file = tmp_path / "scan.out"
    code, _, _ = run(f"scan --id cubic-mstar --a 0.5 --b 0.5 --c 3 --lambda 0 "
                     f"--grid alpha=1.01:1.33:3 --out {out_file}", capsys)
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert len(lines) == 3 and all(json.loads(x)["status"] == "ok" for x in lines)


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# batch settings\nmaxTerms = 10\nrelTol=1e-12\n")
    base = "eval --family generic --upper 1 --z 0.999"
    code, out, _ = run(f"{base} --config {cfg}", capsys)
    assert code == 2 and json.loads(out)["termsUsed"] == 10
    code, out, _ = run(f"{base} --config {cfg} --max-terms 100000", capsys)
    assert code == 0


def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("bogus = 1\n")
    code, _, _ = run(f"eval --family generic --upper 1 --z 0.5 --config {cfg}", capsys)
    assert code == 1


def test_numbers_have_seventeen_digits():
    assert cli.fmt_number(0.1) == "0.10000000000000001"
    assert cli.fmt_number(2.0) == "2.0"
    assert cli.to_json({"x": float("nan")}) == '{"x": null}'
