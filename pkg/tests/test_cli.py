import csv
import io
import json
import subprocess
import sys

import pytest

from hbessel import engine
from hbessel.cli import format_reports, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_list():
    code, text = run("list")
    assert code == 0
    lines = text.strip().splitlines()
    assert len(lines) >= 22
    assert {line.split()[0] for line in lines} == set(engine.IDENTITY_IDS)


def test_run_json_lines_default():
    code, text = run("run", "--filter", "RK-K", "--draws", "2", "--seed", "0")
    assert code == 0
    rows = [json.loads(line) for line in text.splitlines()]
    assert len(rows) == 4
    for row in rows:
        assert row["id"] == "RK-K"
        assert row["pass"] is True
        assert row["ms"] is None
        assert set(row) >= {"params", "lhs", "rhs", "abs_diff", "rel_diff", "lhs_tail", "rhs_tail", "quad_err",
                            "terms"}


def test_run_csv():
    code, text = run("run", "--filter", "WATSON-*", "--draws", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert {r["id"] for r in rows} == {"WATSON-K0", "WATSON-EQ4"}
    assert all(r["pass"] == "True" for r in rows)


def test_run_table():
    code, text = run("run", "--filter", "GUINAND", "--draws", "1", "--format", "table")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0].split()[:2] == ["id", "pass"]
    assert len(lines) == 4
    assert all(" ok " in line for line in lines[1:])


def test_failures_exit_one(capsys):
    code, text = run("run", "--filter", "RK-K", "--draws", "1", "--seed", "0", "--tol", "1e-30")
    assert code == 1
    assert all(not json.loads(line)["pass"] for line in text.splitlines())
    err = capsys.readouterr().err
    assert "warning" in err and "FAIL RK-K" in err


@pytest.mark.parametrize("argv", [
    ("run", "--draws", "0"),
    ("run", "--tol", "-1"),
    ("run", "--tol", "abc"),
    ("run", "--format", "xml"),
    ("run", "--N", "10"),
    ("frobnicate",),
    (),
])
def test_bad_arguments_exit_two(argv, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_no_match_exits_two(capsys):
    code, text = run("run", "--filter", "NOPE")
    assert code == 2
    assert text == ""
    assert "no identity matches" in capsys.readouterr().err


def test_out_file_is_reproducible(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run("run", "--filter", "TAU-*", "--draws", "2", "--seed", "9", "--out", str(a), "--threads", "1")[0] == 0
    assert run("run", "--filter", "TAU-*", "--draws", "2", "--seed", "9", "--out", str(b), "--threads", "3")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 8


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("HB_THREADS", "2")
    assert run("run", "--filter", "ZETA-*", "--draws", "1")[0] == 0


def test_timing_fills_ms():
    code, text = run("run", "--filter", "WATSON-K0", "--draws", "1", "--timing")
    assert code == 0
    assert json.loads(text)["ms"] >= 0


def test_specfun_check():
    code, text = run("specfun-check")
    assert code == 0
    assert len(text.strip().splitlines()) == 8
    assert "FAIL" not in text


def test_integrals():
    code, text = run("integrals", "--draws", "2", "--seed", "1")
    assert code == 0
    assert len(text.strip().splitlines()) == 1 + 8


def test_oracle():
    code, text = run("oracle", "--N", "100")
    assert code == 0
    assert len(text.strip().splitlines()) == 10


def test_format_reports_roundtrip():
    reports = engine.run_suite("ELLIPTIC", 1, seed=2)
    text = format_reports(reports, "json-lines")
    assert json.loads(text)["lhs"] == reports[0].lhs.value


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hbessel.cli", "run", "--filter", "NOPE"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 2
