import json
import subprocess
import sys

import pytest

from cliffosc.cli import EXIT_CHECKS, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, main
from cliffosc.harness import COLUMNS, parse_csv, parse_json

FAST = ["--n", "2", "--Ns", "4,8", "--grid", "16"]


def error_line(capsys):
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    return json.loads(err[0])


def test_superosc_csv_to_stdout(capsys):
    assert main(["superosc", *FAST, "--a", "1"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == ",".join(COLUMNS)
    rows = parse_csv(out)
    assert [r.N for r in rows] == [4, 8]
    assert all(r.sup_error <= 1e-12 for r in rows)


def test_json_output_mirrors_flags(tmp_path):
    out = tmp_path / "r.json"
    assert main(["superosc", *FAST, "--format", "json", "--out", str(out), "--sigma", "4"]) == 0
    config, rows = parse_json(out.read_text())
    assert config["sigma"] == 4.0 and config["Ns"] == [4, 8] and len(rows) == 2


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 2, "Ns": [4, 8, 16], "grid": 16, "a": 3.0}))
    assert main(["superosc", "--config", str(cfg), "--Ns", "4", "--format", "json"]) == 0
    config, rows = parse_json(capsys.readouterr().out)
    assert config["a"] == 3.0 and config["Ns"] == [4] and len(rows) == 1


def test_same_seed_gives_identical_files(tmp_path):
    paths = [tmp_path / f"{i}.csv" for i in range(3)]
    for p, threads in zip(paths, ("1", "1", "4")):
        assert main(["supershift", *FAST, "--seed", "3", "--threads", threads, "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes() == paths[2].read_bytes()


def test_supershift_and_cauchy_subcommands(capsys):
    assert main(["supershift", *FAST, "--target", "bessel", "--profile", "identity"]) == 0
    assert len(parse_csv(capsys.readouterr().out)) == 2
    assert main(["cauchy", "--n", "2", "--Ns", "16,32", "--grid", "4"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    assert rows[1].sup_error < rows[0].sup_error


@pytest.mark.parametrize(
    "argv, field",
    [
        (["superosc", "--Ns", "8,4"], "Ns"),
        (["superosc", "--n", "0"], "n"),
        (["superosc", "--radius", "-2"], "radius"),
        (["superosc", "--Ns", "a,b"], "arguments"),
        (["superosc", "--bogus"], "arguments"),
        (["frobnicate"], "arguments"),
        (["supershift", "--setting", "slice", "--profile", "power:x"], "profile"),
        (["superosc", "--config", "/nonexistent/c.json"], "config"),
    ],
)
def test_config_failures(argv, field, capsys):
    assert main(argv) == EXIT_CONFIG
    line = error_line(capsys)
    assert line["error"] == "ConfigError" and line["field"] == field and line["message"]


def test_env_thread_fallback_error(monkeypatch, capsys):
    monkeypatch.setenv("CLIFFOSC_THREADS", "zero")
    assert main(["superosc", *FAST]) == EXIT_CONFIG
    assert error_line(capsys)["field"] == "CLIFFOSC_THREADS"


def test_numeric_failure(capsys):
    argv = ["supershift", "--setting", "monogenic", "--n", "2", "--Ns", "8", "--grid", "8", "--K", "4"]
    assert main(argv) == EXIT_NUMERIC
    assert error_line(capsys)["error"] == "TruncationError"


def test_io_failure(tmp_path, capsys):
    assert main(["superosc", *FAST, "--out", str(tmp_path / "missing" / "x.csv")]) == EXIT_IO
    line = error_line(capsys)
    assert line["error"] == "IOError" and "missing" in line["message"]


def test_verify_subcommand(capsys):
    assert main(["verify", "clifford"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(line.startswith("PASS clifford.") for line in lines)


def test_verify_reports_failures(monkeypatch, capsys):
    import cliffosc.cli as cli
    from cliffosc.verify import CheckResult

    monkeypatch.setattr(cli, "run_verify", lambda suite, seed=0: [CheckResult("x", "y", False, 1.0, 0.0, 0.0)])
    assert main(["verify"]) == EXIT_CHECKS
    captured = capsys.readouterr()
    assert captured.out.startswith("FAIL x.y")
    assert json.loads(captured.err)["error"] == "CheckFailure"


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cliffosc", "superosc", *FAST, "--Ns", "9,4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == EXIT_CONFIG
    assert json.loads(proc.stderr)["field"] == "Ns"
