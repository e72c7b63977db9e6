import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from walkval.cli import main

import oracles

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def data_rows(text):
    return [ln.split("\t") for ln in text.splitlines() if ln and not ln.startswith("#")]


def test_walks_w4_golden():
    code, text = run("walks", "--d", "4", "--n-max", "50")
    assert code == 0
    assert text == (GOLDEN / "w4_valuations.tsv").read_text()
    assert len(data_rows(text)) == 50


def test_walks_star():
    code, text = run("walks", "--d", "4", "--n-max", "3", "--star")
    assert code == 0
    assert text.splitlines()[1] == "#n\ts2\tw\tw_star"
    assert data_rows(text)[-1] == ["3", "2", "10", "8"]


def test_walks_d1_is_digit_sum():
    rows = data_rows(run("walks", "--d", "1", "--n-max", "4")[1])
    assert all(r[1] == r[2] for r in rows)


def test_walks_json():
    obj = json.loads(run("walks", "--d", "2", "--n-max", "2", "--format", "json")[1])
    assert obj == {"d": 2, "rows": [{"n": 1, "s2": 1, "w": 2}, {"n": 2, "s2": 1, "w": 2}]}


def test_verify_ok_and_equality_rows():
    code, text = run("verify", "prop-odd", "--n-max", "256")
    assert code == 0
    assert text.startswith("#scenario prop-odd rows=256 failures=0\n")
    rows = data_rows(text)
    assert [int(r[0]) for r in rows if r[3] == "1"] == [n for n in range(1, 257) if "11" not in bin(n)]


def test_verify_params_and_jobs():
    a = run("verify", "prop-mult", "--param", "k=2", "--n-max", "64")
    b = run("verify", "prop-mult", "--param", "k=2", "--n-max", "64", "--jobs", "3")
    assert a == b and a[0] == 0


def test_verify_identity():
    code, text = run("verify", "identity-X", "--n-max", "200")
    assert code == 0 and "failures=0" in text.splitlines()[0]


@pytest.mark.parametrize("argv", [
    ["verify", "no-such", "--n-max", "3"],
    ["verify", "theorem-c", "--param", "d=3", "--n-max", "3"],
    ["verify", "prop-odd", "--param", "oops", "--n-max", "3"],
    ["walks", "--d", "0", "--n-max", "3"],
    ["automaton", "--poly", "x1"],
    ["automaton", "--p", "3", "--r", "3"],
    ["automaton", "--crosscheck", "8"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


@pytest.mark.parametrize("name,argv", [
    ("odd_binomials.tsv", ["--r", "2", "--e=-1"]),
    ("walks_4mod8.tsv", ["--r", "2", "--e=-4,1", "--mode", "halt-single-letter"]),
    ("walks_0mod8.tsv", ["--r", "4", "--e=-4,1", "--mode", "halt-single-letter"]),
    ("walks_4mod8.json", ["--r", "2", "--e=-4,1", "--mode", "halt-single-letter", "--format", "json"]),
])
def test_automaton_dumps(name, argv):
    code, text = run("automaton", "--p", "2", *argv)
    assert code == 0
    assert text == (GOLDEN / name).read_text(encoding="utf-8")


def test_automaton_crosscheck():
    code, text = run("automaton", "--r", "8", "--e=-4,1", "--mode", "halt-single-letter",
                     "--crosscheck", "64", "--scenario", "theorem-d")
    assert code == 0
    assert text.splitlines()[-1] == "#crosscheck theorem-d n<=64 checked=64 mismatches=0"
    code, text = run("automaton", "--r", "8", "--e=-4,1", "--mode", "halt-single-letter",
                     "--crosscheck", "16", "--scenario", "prop-odd")
    assert code == 1


def test_automaton_state_limit():
    assert run("automaton", "--state-limit", "2", "--no-minimize")[0] == 3


def _bfile(tmp_path, values, name="b.txt"):
    path = tmp_path / name
    path.write_text("# Domb numbers\n" + "".join(f"{n} {v}\n" for n, v in enumerate(values)))
    return path


DOMB = [oracles.wstar_direct(4, n) for n in range(16)]


def test_crosscheck_good(tmp_path):
    code, text = run("crosscheck", str(_bfile(tmp_path, DOMB)), "--kind", "Domb")
    assert code == 0
    assert text == "#crosscheck Domb b.txt terms=16 mismatches=0\n"


def test_crosscheck_fault(tmp_path):
    bad = DOMB[:]
    bad[9] += 10**3
    code, text = run("crosscheck", str(_bfile(tmp_path, bad)), "--kind", "Domb")
    assert code == 1
    assert data_rows(text) == [["11", "9", str(bad[9]), str(DOMB[9])]]


def test_crosscheck_other_kinds(tmp_path):
    w3 = [oracles.w_direct(3, n) for n in range(8)]
    assert run("crosscheck", str(_bfile(tmp_path, w3)), "--kind", "W", "--params", "3")[0] == 0
    assert run("crosscheck", str(_bfile(tmp_path, w3)), "--kind", "U", "--params", "2,2")[0] == 0
    assert run("crosscheck", str(_bfile(tmp_path, w3)), "--kind", "W")[0] == 2


def test_crosscheck_truncated_and_missing(tmp_path, capsys):
    path = tmp_path / "t.txt"
    path.write_text("0 1\n1 4\n2")
    assert run("crosscheck", str(path), "--kind", "Domb")[0] == 2
    assert "line 3" in capsys.readouterr().err
    assert run("crosscheck", str(tmp_path / "none.txt"), "--kind", "Domb")[0] == 2


def test_cache_commands(tmp_path):
    cache = str(tmp_path / "seq.tsv")
    assert run("walks", "--d", "5", "--n-max", "6", "--cache", cache)[0] == 0
    code, text = run("cache", "inspect", "--cache", cache)
    assert code == 0
    assert "Wstar\t5\t" in text
    assert run("cache", "clear", "--cache", cache)[0] == 0
    assert run("cache", "inspect", "--cache", cache)[1].startswith(f"#cache {cache} records=0")


def test_cache_needs_path(monkeypatch):
    monkeypatch.delenv("WALKVAL_CACHE", raising=False)
    assert run("cache", "inspect")[0] == 2


def test_console_script_runs():
    out = subprocess.run([sys.executable, "-m", "walkval.cli", "walks", "--d", "3", "--n-max", "2"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "#walks d=3\n#n\ts2\tw\n1\t1\t1\n2\t1\t1\n"
