"""Instance and solution files.

Both are JSON documents in which every number is a rational string such as
``"3"``, ``"-1/2"``; integer literals are accepted, floating-point literals
and decimal strings are not.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional

from . import linalg as la
from .errors import ParseError, ValidationError
from .model import SdpProblem
from .rational import format_rational, parse_rational
from .solver import SolveResult, TraceRecord

SOLUTION_FORMAT = "exactsdp-solution/1"


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ParseError(f"{where}: floating-point literal {value!r} rejected; write it as \"p/q\"")
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError:
            raise ParseError(f"{where}: {value!r} is not a rational literal \"p/q\"") from None
    raise ParseError(f"{where}: expected a rational, got {type(value).__name__}")


def _natural(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ParseError(f"{where}: expected a natural number, got {value!r}")
    return value


def _vector(value: Any, where: str, length: Optional[int] = None) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected a list")
    if length is not None and len(value) != length:
        raise ParseError(f"{where}: expected {length} entries, got {len(value)}")
    return [_rational(x, f"{where}[{i}]") for i, x in enumerate(value)]


def _matrix(value: Any, where: str, n: int) -> la.Matrix:
    if not isinstance(value, list) or len(value) != n:
        raise ParseError(f"{where}: expected a list of {n} rows")
    return [_vector(row, f"{where}[{i}]", n) for i, row in enumerate(value)]


def _load_json(text: str, source: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    return doc


def _require(doc: dict, key: str, source: str):
    if key not in doc:
        raise ParseError(f"{source}: missing field {key!r}")
    return doc[key]


def instance_from_dict(doc: dict, source: str = "instance", validate: bool = True) -> SdpProblem:
    n = _natural(_require(doc, "n", source), "n")
    m = _natural(_require(doc, "m", source), "m")
    C = _matrix(_require(doc, "C", source), "C", n)
    A_raw = _require(doc, "A", source)
    if not isinstance(A_raw, list) or len(A_raw) != m:
        raise ParseError(f"A: expected a list of {m} matrices")
    A_list = [_matrix(A, f"A[{j}]", n) for j, A in enumerate(A_raw)]
    b = _vector(_require(doc, "b", source), "b", m)
    X0 = _matrix(_require(doc, "X0", source), "X0", n)
    r = _rational(_require(doc, "r", source), "r")
    R = _rational(_require(doc, "R", source), "R")
    epsilon = _rational(_require(doc, "epsilon", source), "epsilon")
    return SdpProblem.build(C, A_list, b, X0, r, R, epsilon, validate=validate)


def parse_instance(path) -> SdpProblem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return instance_from_dict(_load_json(text, str(path)), str(path))


def _fmt_matrix(M) -> list:
    return [[format_rational(x) for x in row] for row in M]


def instance_to_dict(problem: SdpProblem) -> dict:
    return {
        "n": problem.n,
        "m": problem.m,
        "C": _fmt_matrix(problem.C),
        "A": [_fmt_matrix(A) for A in problem.A_list],
        "b": [format_rational(x) for x in problem.b],
        "X0": _fmt_matrix(problem.X0),
        "r": format_rational(problem.r),
        "R": format_rational(problem.R),
        "epsilon": format_rational(problem.epsilon),
    }


def write_instance(problem: SdpProblem, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(problem), indent=1) + "\n", encoding="utf-8")


def _opt(x: Optional[Fraction]):
    return None if x is None else format_rational(x)


def solution_to_dict(result: SolveResult, problem: SdpProblem, phase1_only: bool = False, embed_trace: bool = False) -> dict:
    if result.degenerate and not phase1_only:
        status = "degenerate"
    else:
        status = "phase1" if phase1_only else "optimal"
    doc = {
        "format": SOLUTION_FORMAT,
        "status": status,
        "n": problem.n,
        "X_star": _fmt_matrix(result.X_star.matrix),
        "objective": format_rational(result.objective),
        "gap_bound": _opt(result.gap_bound),
        "epsilon": format_rational(problem.epsilon),
        "eta_final": _opt(result.eta_final),
        "iterations": dict(result.iterations),
    }
    if result.bounds is not None:
        doc["eps_bar"] = format_rational(result.bounds.eps_bar)
    if phase1_only:
        last = result.phase1.trace[-1] if result.phase1 and result.phase1.trace else None
        doc["phase1_proximity_sq"] = _opt(last.proximity_sq if last else Fraction(0))
        doc["phase2_start"] = {
            "eta1": _opt(result.eta1),
            "proximity_sq": _opt(result.phase2_start_proximity_sq),
        }
    if embed_trace:
        doc["trace"] = [rec.to_json() for rec in result.trace]
    return doc


def write_trace(records: Iterable[TraceRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json()) + "\n")


def read_trace(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def load_solution(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return _load_json(text, str(path))


def verify_solution(problem: SdpProblem, doc: dict) -> Fraction:
    """Re-check a solution document exactly; return its objective value.

    Raises :class:`ValidationError` naming the first failed check.
    """
    n = problem.n
    X = _matrix(_require(doc, "X_star", "solution"), "X_star", n)
    if not la.is_symmetric(X):
        raise ValidationError("X_star is not symmetric")
    for j, (ax, bj) in enumerate(zip(problem.apply_A(X), problem.b)):
        if ax != bj:
            raise ValidationError(
                f"feasibility residual nonzero at constraint {j + 1}: <A_{j + 1},X_star> - b_{j + 1} = {format_rational(ax - bj)}"
            )
    pd = la.ldl_pd_check(X)
    if not pd:
        raise ValidationError(f"X_star not positive definite: LDL pivot {pd.index} = {format_rational(pd.pivot)}")
    objective = la.inner(problem.C, X)
    claimed = _rational(_require(doc, "objective", "solution"), "objective")
    if claimed != objective:
        raise ValidationError(
            f"objective mismatch: file says {format_rational(claimed)}, <C,X_star> = {format_rational(objective)}"
        )
    gap = doc.get("gap_bound")
    eta = doc.get("eta_final")
    if gap is not None and eta is not None and doc.get("status") == "optimal":
        if _rational(gap, "gap_bound") != n / _rational(eta, "eta_final"):
            raise ValidationError("gap_bound is not n / eta_final")
    return objective
