import io
import json
import subprocess
import sys

import pytest

from pancake.cli import run

SAT = "p cnf 1 1\n1 1 1 0\n"
UNSAT = "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n"


@pytest.fixture
def cnf_file(tmp_path):
    def make(text):
        f = tmp_path / "f.cnf"
        f.write_text(text)
        return str(f)

    return make


def test_decide_examples(capsys):
    assert run(["decide", "5 2 3 1 4"]) == 0
    assert "4 flips: 5 4 2 3" in capsys.readouterr().out
    assert run(["decide", "5 2 3 4 1"]) == 1
    assert capsys.readouterr().out.strip() == "not efficiently sortable"


def test_decide_trace_schema(tmp_path):
    trace = tmp_path / "t.json"
    assert run(["decide", "[5,2,3,1,4]", "--trace", str(trace)]) == 0
    doc = json.loads(trace.read_text())
    assert list(doc) == ["source", "flips", "efficient", "db_trace", "stats"]
    assert list(doc["stats"]) == ["nodes", "seconds"]
    assert doc["flips"] == [5, 4, 2, 3] and doc["efficient"] and doc["db_trace"] == [4, 3, 2, 1, 0]


def test_decide_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("2 1 3\n"))
    assert run(["decide", "-"]) == 0
    assert "1 flips: 2" in capsys.readouterr().out


def test_sort(capsys):
    assert run(["sort", "5 2 3 4 1", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["flips"]) == 4 and not doc["efficient"] and doc["db_trace"][-1] == 0
    assert run(["sort", "2 1", "--greedy"]) == 0
    assert capsys.readouterr().out.splitlines() == ["flips: 2", "length: 1"]
    assert run(["sort", "1 2", "--greedy", "--exact"]) == 64


def test_diameter(capsys):
    assert run(["diameter", "2"]) == 0
    assert capsys.readouterr().out.strip() == "f(2) = 1"
    assert run(["diameter", "11"]) == 3
    assert run(["diameter", "0"]) == 64


def test_reduce_and_roundtrip(cnf_file, tmp_path, capsys):
    for text, verdict in ((SAT, 0), (UNSAT, 1)):
        src = cnf_file(text)
        out, lay = tmp_path / "s.txt", tmp_path / "l.json"
        assert run(["reduce", src, "--out", str(out), "--layout", str(lay)]) == 0
        layout = json.loads(lay.read_text())
        assert len(out.read_text().split()) == layout["n"]
        assert run(["check-theorem", src]) == 0
        assert run(["decide", str(out)]) == verdict
    capsys.readouterr()


def test_reduce_to_stdout(cnf_file, capsys):
    assert run(["reduce", cnf_file(SAT)]) == 0
    assert len(capsys.readouterr().out.split()) == 129


def test_check_theorem_output(cnf_file, capsys):
    assert run(["check-theorem", cnf_file(UNSAT)]) == 0
    out = capsys.readouterr().out
    assert "sortable = false, satisfiable = false" in out and "equivalence holds" in out


def test_budget_exit_code(cnf_file, monkeypatch):
    monkeypatch.setenv("PANCAKE_NODE_BUDGET", "3")
    assert run(["check-theorem", cnf_file(UNSAT)]) == 3
    monkeypatch.delenv("PANCAKE_NODE_BUDGET")
    assert run(["check-theorem", cnf_file(UNSAT), "--node-budget", "3"]) == 3


@pytest.mark.parametrize(
    "argv, code",
    [
        ([], 64),
        (["nope"], 64),
        (["decide", "1 1"], 64),
        (["decide", "/no/such/file"], 74),
        (["reduce", "/no/such/file"], 74),
        (["verify-gadgets", "--seed", "x"], 64),
    ],
)
def test_error_codes(argv, code, capsys):
    assert run(argv) == code


def test_bad_dimacs(cnf_file):
    assert run(["check-theorem", cnf_file("p cnf 1 1\n1 1 0\n")]) == 64


def test_verify_gadgets_deterministic(capsys):
    assert run(["verify-gadgets", "--seed", "7", "--samples", "3"]) == 0
    first = capsys.readouterr().out
    assert run(["verify-gadgets", "--seed", "7", "--samples", "3"]) == 0
    assert capsys.readouterr().out == first
    lines = first.splitlines()
    assert len(lines) == 20 and all(line.split()[1] == "OK" for line in lines)


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "pancake", "diameter", "3"], capture_output=True, text=True
    )
    assert res.returncode == 0 and res.stdout.strip() == "f(3) = 3"
