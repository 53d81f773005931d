import json

import pytest

from qball.cli import main
from qball.graphs import DirectedGraph, ball_graph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_graph(capsys):
    code, out, _ = run(capsys, "graph", "--n", "2")
    assert code == 0
    assert DirectedGraph.from_json(out) == ball_graph(2)


def test_paths(capsys):
    code, out, _ = run(capsys, "paths", "--n", "2", "--cutoff", "2")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 16
    assert lines[0].startswith("v0")


@pytest.mark.parametrize(
    "n,word,want",
    [
        ("1", "S[e]* S[e]", "P[v0]"),
        ("2", "S[b] S[b]* S[e]", "0"),
        ("1", "", "P[v0] + P[v1]"),
        ("2", "S[c] S[b]*", "S[c]S[b]*"),
    ],
)
def test_reduce(capsys, n, word, want):
    code, out, _ = run(capsys, "reduce", "--n", n, word)
    assert code == 0 and out.strip() == want


def test_reduce_parse_error(capsys):
    code, out, err = run(capsys, "reduce", "--n", "1", "S[zz]")
    assert code == 2 and out == ""
    assert "parse error" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["graph", "--n", "0"],
        ["paths", "--n", "2", "--cutoff", "-1"],
        ["verify", "--n", "1", "--q", "1.5"],
        ["verify", "--n", "1", "--suite", "nope"],
        ["verify", "--n", "1", "--tol", "0"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_verify_pass(capsys):
    code, out, err = run(capsys, "verify", "--n", "1", "--q", "0.3", "--q", "0.9")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] is True
    assert "0 failed" in err
    assert {c["q"] for c in doc["checks"] if "q" in c} == {0.3, 0.9}


def test_verify_failure_exit_code(capsys):
    code, out, err = run(capsys, "verify", "--n", "1", "--suite", "ball", "--tol", "1e-300")
    assert code == 1
    assert json.loads(out)["pass"] is False
    assert "FAIL" in err


def test_verify_ndjson(capsys):
    code, out, _ = run(capsys, "verify", "--n", "1", "--suite", "cuntz_krieger", "--format", "ndjson")
    lines = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert "context" in lines[0] and lines[-1] == {"pass": True}


def test_out_file_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        assert main(["verify", "--n", "2", "--seed", "3", "--out", str(f)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["pass"] is True
