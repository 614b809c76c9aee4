import json
from fractions import Fraction as F

import pytest

from exactsdp import linalg as la
from exactsdp.cli import run
from exactsdp.errors import ParseError, ValidationError
from exactsdp.instances import min_eigenvalue
from exactsdp.io import instance_from_dict, instance_to_dict, parse_instance, read_trace, write_instance

MINIMAL = {
    "n": 1,
    "m": 1,
    "A": [[["1"]]],
    "b": ["1"],
    "C": [["1"]],
    "X0": [["1"]],
    "r": "1/2",
    "R": "1",
    "epsilon": "1/10",
}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def min_eig_file(tmp_path):
    path = tmp_path / "mineig.json"
    write_instance(min_eigenvalue(la.diag([1, 2]), r=F(1, 2), R=2), path)
    return path


def test_parse_minimal_instance(tmp_path):
    p = parse_instance(write(tmp_path, "ok.json", MINIMAL))
    assert (p.n, p.m, p.d) == (1, 1, 0)
    assert p.r == F(1, 2)


def test_parse_rejects_infeasible_start(tmp_path):
    with pytest.raises(ValidationError, match="<A_1,X0> != b_1"):
        parse_instance(write(tmp_path, "bad.json", dict(MINIMAL, b=["2"])))


@pytest.mark.parametrize("value", ["0.5", 0.5])
def test_parse_rejects_decimals(tmp_path, value):
    with pytest.raises(ParseError, match="r"):
        parse_instance(write(tmp_path, "dec.json", dict(MINIMAL, r=value)))


@pytest.mark.parametrize(
    "change, message",
    [
        (dict(n=2), "C: expected a list of 2 rows"),
        (dict(m=2), "A: expected a list of 2 matrices"),
        (dict(b=[]), "b: expected 1 entries"),
        (dict(C=[["x"]]), r"C\[0\]\[0\]"),
        (dict(epsilon=True), "boolean"),
    ],
)
def test_parse_errors_name_the_field(tmp_path, change, message):
    with pytest.raises(ParseError, match=message):
        parse_instance(write(tmp_path, "e.json", dict(MINIMAL, **change)))


def test_parse_reports_json_location(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"n": 1,\n "m": }')
    with pytest.raises(ParseError, match="line 2"):
        parse_instance(path)


def test_missing_field(tmp_path):
    doc = dict(MINIMAL)
    del doc["X0"]
    with pytest.raises(ParseError, match="missing field 'X0'"):
        parse_instance(write(tmp_path, "m.json", doc))


def test_instance_round_trip(tmp_path):
    p = min_eigenvalue(la.to_matrix([[F(1, 3), -2, 0], [-2, 5, F(7, 9)], [0, F(7, 9), 1]]))
    path = tmp_path / "rt.json"
    write_instance(p, path)
    q = parse_instance(path)
    assert q == p
    assert instance_to_dict(q) == instance_to_dict(p)
    assert instance_from_dict(json.loads(path.read_text())) == p


def test_solve_writes_solution_and_trace(tmp_path, min_eig_file):
    out, trace = tmp_path / "sol.json", tmp_path / "trace.jsonl"
    assert run(["solve", str(min_eig_file), "--out", str(out), "--trace", str(trace)]) == 0
    doc = json.loads(out.read_text())
    assert doc["status"] == "optimal"
    gap = F(doc["gap_bound"])
    assert gap <= F(1, 100) * (2 - 1)
    assert 1 < F(doc["objective"]) <= 1 + F(1, 100)
    records = read_trace(trace)
    assert len(records) == doc["iterations"]["phase1"] + doc["iterations"]["phase2"]
    for phase in (1, 2):
        ks = [r["k"] for r in records if r["phase"] == phase]
        assert ks == list(range(1, len(ks) + 1))
    assert run(["solve", str(min_eig_file), "--verify-only", str(out)]) == 0


def test_solve_to_stdout_with_embedded_trace(min_eig_file, capsys):
    assert run(["solve", str(min_eig_file), "--embed-trace"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["trace"]) == sum(doc["iterations"].values())


def test_phase1_only(tmp_path, min_eig_file):
    out = tmp_path / "p1.json"
    assert run(["solve", str(min_eig_file), "--phase1-only", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["status"] == "phase1" and doc["iterations"]["phase2"] == 0
    assert F(doc["phase1_proximity_sq"]) <= F(1, 16)
    assert F(doc["phase2_start"]["proximity_sq"]) <= F(1, 16)


def test_verify_only_rejects_tampered_solution(tmp_path, min_eig_file, capsys):
    out = tmp_path / "sol.json"
    assert run(["solve", str(min_eig_file), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    x = F(doc["X_star"][0][0])
    doc["X_star"][0][0] = str(x + F(1, 10**6))
    tampered = write(tmp_path, "tampered.json", doc)
    capsys.readouterr()
    assert run(["solve", str(min_eig_file), "--verify-only", str(tampered)]) != 0
    assert "feasibility residual nonzero at constraint 1" in capsys.readouterr().err


def test_verify_only_rejects_wrong_objective(tmp_path, min_eig_file, capsys):
    out = tmp_path / "sol.json"
    run(["solve", str(min_eig_file), "--out", str(out)])
    doc = json.loads(out.read_text())
    doc["objective"] = "1"
    assert run(["solve", str(min_eig_file), "--verify-only", str(write(tmp_path, "o.json", doc))]) == 2
    assert "objective mismatch" in capsys.readouterr().err


def test_exit_codes(tmp_path, capsys):
    assert run(["solve", str(write(tmp_path, "dec.json", dict(MINIMAL, r="0.5")))]) == 2
    assert capsys.readouterr().err.startswith("error: parse:")
    assert run(["solve", str(write(tmp_path, "bad.json", dict(MINIMAL, b=["2"])))]) == 2
    assert capsys.readouterr().err.startswith("error: validation:")
    assert run(["solve", str(tmp_path / "missing.json")]) == 2
    small_R = tmp_path / "smallR.json"
    write_instance(min_eigenvalue(la.diag([1, 2]), r=F(1, 16), R=F(1, 8)), small_R)
    assert run(["solve", str(small_R)]) == 3
    assert "exceeds 2R" in capsys.readouterr().err
    budget = tmp_path / "budget.json"
    write_instance(min_eigenvalue(la.diag([1, 2]), r=F(1, 2), R=2), budget)
    assert run(["solve", str(budget), "--max-iters", "3"]) == 4
    assert capsys.readouterr().err.startswith("error: iteration-budget:")


def test_degenerate_objective_status(tmp_path, capsys):
    path = tmp_path / "flat.json"
    write_instance(min_eigenvalue(la.scale(3, la.identity(2))), path)
    assert run(["solve", str(path)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["status"] == "degenerate" and doc["objective"] == "3" and doc["gap_bound"] == "0"
