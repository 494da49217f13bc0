import csv
import io
import json
import subprocess
import sys

import pytest

from wgcalc.cli import main
from wgcalc.engine import SYMBOLIC, ascension, descension, weingarten
from wgcalc.group_algebra import ClassFunction


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_wg_symbolic(capsys):
    code, out, _ = run(capsys, "wg", "-k", "2", "--symbolic")
    assert code == 0
    assert out.splitlines() == ["e: 1/((n-1)*(n+1))", "(2): -1/((n-1)*n*(n+1))"]


def test_wg_ladder(capsys):
    code, out, _ = run(capsys, "wg", "-k", "3", "-n", "3", "--route", "ladder")
    assert code == 0
    assert "e: 7/120" in out.splitlines()


def test_domain_error_exit_1(capsys):
    code, out, err = run(capsys, "wg", "-k", "3", "-n", "2")
    assert code == 1 and out == ""
    assert "pseudo-wg" in err and len(err.strip().splitlines()) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["wg", "-k", "2"],
        ["wg", "-k", "2", "-n", "3", "--symbolic"],
        ["wg", "-n", "3"],
        ["nosuch"],
        ["verify", "nosuch"],
        ["wg", "-k", "2", "-n", "3", "--route", "fast"],
        ["table", "wg", "-k", "2"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_decimal_flag(capsys):
    _, out, _ = run(capsys, "wg", "-k", "2", "-n", "3")
    assert "~" not in out
    _, out, _ = run(capsys, "wg", "-k", "2", "-n", "3", "--decimal")
    assert "e: 1/8  ~ 0.125" in out


def test_pseudo_raise_lower_gram(capsys):
    assert run(capsys, "pseudo-wg", "-k", "2", "-n", "1")[1].splitlines() == ["e: 1/4", "(2): 1/4"]
    assert run(capsys, "raise", "-k", "2", "-n", "2")[1].splitlines() == ["e: 1/6", "(2): 1/6"]
    assert run(capsys, "lower", "-k", "2", "-n", "2")[1].splitlines() == ["e: 5/2", "(2): -1/2"]
    assert run(capsys, "gram", "-k", "2", "-n", "3")[1].splitlines() == ["e: 9", "(2): 3"]


def test_json_output_round_trips(capsys):
    _, out, _ = run(capsys, "wg", "-k", "3", "--symbolic", "--format", "json")
    assert ClassFunction.from_json(out) == weingarten(3, SYMBOLIC)


def test_table_csv_range(capsys):
    code, out, _ = run(capsys, "table", "wg", "-k", "2", "--nmin", "2", "--nmax", "5", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8
    # reverse-lex cycle types within each n
    assert [r["cycle_type"] for r in rows[:2]] == ["2", "1,1"]
    for r in rows:
        nv = int(r["n"])
        expect = {"1,1": f"1/{(nv - 1) * (nv + 1)}", "2": f"-1/{(nv - 1) * nv * (nv + 1)}"}[r["cycle_type"]]
        assert r["value"] == expect


def test_table_raise_symbolic(capsys):
    _, out, _ = run(capsys, "table", "raise", "-k", "3", "--symbolic", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["cycle_type", "value"]
    assert [r[0] for r in rows[1:]] == ["3", "2,1", "1,1,1"]


def test_table_lower_single(capsys):
    _, out, _ = run(capsys, "table", "lower", "-k", "2", "-n", "2", "--format", "csv")
    assert out.splitlines() == ["cycle_type,value", "2,-1/2", '"1,1",5/2']


def test_table_json_round_trip(tmp_path, capsys):
    path = tmp_path / "t.json"
    code, _, _ = run(capsys, "table", "raise", "-k", "3", "--nmin", "4", "--nmax", "6", "--format", "json", "--out", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    for entry in data:
        assert ClassFunction.from_json_dict(entry) == ascension(3, int(entry["n"]))
    path2 = tmp_path / "l.json"
    run(capsys, "table", "lower", "-k", "3", "--symbolic", "--format", "json", "--out", str(path2))
    assert ClassFunction.from_json(path2.read_text()) == descension(3, SYMBOLIC)


def test_out_path_error(capsys):
    code, _, err = run(capsys, "table", "wg", "-k", "2", "-n", "3", "--out", "/nonexistent/dir/x.csv")
    assert code == 1 and "/nonexistent/dir/x.csv" in err


def test_moment(capsys):
    _, out, _ = run(capsys, "moment", "p[1,2]^2 p[n,1]^2 p[n,n]^3 p~[n,2]^2", "--symbolic")
    assert out.strip().endswith("= 4/(n*(n+1)*(n+5)*(n+6))")
    _, out, _ = run(capsys, "moment", "u[n-1,n-1] u[n,n] u~[n-1,n] u~[n,n-1]", "-n", "4", "--u-route", "recursive", "--format", "json")
    assert json.loads(out)["value"] == "-1/60"
    code, _, _ = run(capsys, "moment", "p[1,2", "-n", "3")
    assert code == 1


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "recursion", "--kmax", "3", "--nmax", "5")
    assert code == 0 and "0 failed" in out
    code, out, _ = run(capsys, "verify", "pseudo", "--k", "3", "--n", "2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["failed"] == 0 and d["passed"] == 2
    code, out, _ = run(capsys, "verify", "negative-control")
    assert code == 0 and "1/12" in out


def test_verify_failure_exits_nonzero(capsys, monkeypatch):
    from wgcalc import cli
    from wgcalc.verify import Check

    monkeypatch.setattr(cli, "run_suite", lambda *a: [Check("x", "broken", False)])
    code, out, _ = run(capsys, "verify", "routes")
    assert code == 1 and "[FAIL]" in out


def test_sample_json(capsys, monkeypatch):
    monkeypatch.setenv("WGCALC_WORKERS", "2")
    code, out, _ = run(capsys, "sample", "|x[1]|^2", "-n", "2", "--samples", "4000", "--seed", "3", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["exact"] == "1/2" and d["N"] == 4000 and d["seed"] == 3
    # env default equals explicit flag
    _, out2, _ = run(capsys, "sample", "|x[1]|^2", "-n", "2", "--samples", "4000", "--seed", "3", "--format", "json", "--workers", "2")
    assert json.loads(out2)["mean"] == d["mean"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "wgcalc", "wg", "-k", "1", "-n", "1"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "e: 1"
