import json
import subprocess
import sys
from pathlib import Path

import pytest

from kummerlab import cli, suites
from kummerlab.counting import CSV_HEADER

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_schema_is_fixed():
    assert ",".join(CSV_HEADER) == "model,p,param1,param2,exact,euler,formula,match,skipped"


@pytest.mark.parametrize("fmt,suffix", [("csv", "csv"), ("jsonl", "jsonl")])
def test_golden_reports(capsys, fmt, suffix):
    code, out, _ = run(capsys, "sweep", "--model", "kummer-j6", "--p", "5", "--params", "2,all", "--format", fmt)
    assert code == 0
    assert out == (GOLDEN / f"sweep_kummer_j6_p5.{suffix}").read_text()


def test_count_examples(capsys):
    code, out, _ = run(capsys, "count", "--model", "kummer-j6", "--p", "5", "--params", "2,3")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2 and lines[1] == "kummer-j6,5,2,3,26,1,1,true,0"
    code, out, _ = run(capsys, "count", "--model", "k3-z", "--p", "7", "--params", "0,0", "--format", "jsonl")
    assert code == 0 and json.loads(out)["euler"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--model", "kummer-j6", "--p", "4"],
        ["count", "--model", "kummer-j6", "--p", "2", "--params", "1,1"],
        ["count", "--model", "nope", "--p", "5", "--params", "1,1"],
        ["count", "--model", "k3-y", "--p", "5", "--params", "1,2"],
        ["count", "--model", "k3-z", "--p", "5", "--params", "1-3,2"],
        ["count", "--model", "k3-z", "--p", "5", "--params", "1"],
        ["sweep", "--model", "k3-z"],
        ["sweep", "--model", "k3-z", "--p", "5", "--jobs", "0"],
        ["verify", "--suite", "bogus"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_prime_cap_from_env(capsys, monkeypatch):
    monkeypatch.setenv("KUMMERLAB_MAX_P", "7")
    code, _, err = run(capsys, "count", "--model", "legendre", "--p", "11", "--params", "2")
    assert code == 2 and "cap" in err


def test_sweep_k3z(capsys):
    code, out, _ = run(capsys, "sweep", "--model", "k3-z", "--p", "11")
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 121 and all(r.endswith(",true,0") for r in rows)


def test_sweep_legendre(capsys):
    code, out, err = run(capsys, "sweep", "--model", "legendre", "--p", "101")
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 101 and "sampling" not in err


def test_sweep_sampled_is_reproducible(capsys, tmp_path):
    argv = ["sweep", "--model", "kummer-j6", "--p", "13", "--sample", "50", "--seed", "42"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, *argv, "--out", str(a))[0] == 0
    assert run(capsys, *argv, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 51
    _, out, _ = run(capsys, *argv, "--seed", "43")
    assert out != a.read_text()


def test_sweep_parallel_same_content(capsys):
    argv = ["sweep", "--model", "k3-y", "--p", "11", "--sample", "40", "--seed", "5"]
    _, serial, _ = run(capsys, *argv)
    _, parallel, _ = run(capsys, *argv, "--jobs", "2")
    assert sorted(serial.splitlines()) == sorted(parallel.splitlines())


def test_sweep_default_sampling(capsys):
    code, out, err = run(capsys, "sweep", "--model", "k3-z", "--p", "1009", "--params", "2,all")
    assert code == 0 and "sampling 1 tuples" in err and len(out.splitlines()) == 2


def test_param_ranges():
    assert cli.parse_param_ranges("all", 5, 2) == [range(5), range(5)]
    assert cli.parse_param_ranges("1-3,*", 5, 2) == [range(1, 4), range(5)]
    assert cli.parse_param_ranges("-1,7", 5, 2) == [range(4, 5), range(2, 3)]


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "identity", "--primes", "5,7,11,13")
    assert code == 0 and out.startswith("identity: PASS") and "failures=0" in out
    code, out, _ = run(capsys, "verify", "--suite", "pf", "--primes-up-to", "37")
    assert code == 0 and "pf: PASS" in out
    code, out, _ = run(capsys, "verify", "--suite", "clausen")
    residual = float(out.split("max_residual=")[1].split()[0])
    assert code == 0 and residual < 1e-10


def test_verify_failure_exit_status(capsys, monkeypatch):
    def broken(**_):
        res = suites.SuiteResult("broken")
        res.check(False, p=5, why="forced")
        return res

    monkeypatch.setitem(suites.SUITES, "countz", broken)
    code, out, _ = run(capsys, "verify", "--suite", "countz,igusa", "--primes", "5")
    assert code == 1
    assert "broken: FAIL" in out and '"why": "forced"' in out and "igusa: PASS" in out


def test_verify_report_file(capsys, tmp_path):
    path = tmp_path / "verify.jsonl"
    code, _, _ = run(capsys, "verify", "--suite", "twist", "--suite", "combinatorics", "--primes", "7", "--out", str(path))
    records = [json.loads(x) for x in path.read_text().splitlines()]
    assert code == 0 and [r["suite"] for r in records] == ["twist", "combinatorics"]
    assert all(r["passed"] and r["failures"] == [] for r in records)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kummerlab.cli", "count", "--model", "legendre", "--p", "7", "--params", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.splitlines()[1].startswith("legendre,7,3,,")
