"""Exact-arithmetic short-step interior point solver for semidefinite programs."""

from .errors import (
    DegenerateObjectiveError,
    GeometryError,
    InvariantError,
    IterationBudgetExceeded,
    ParseError,
    RankDeficiencyError,
    RepresentationError,
    SdpError,
    SingularMatrixError,
    ValidationError,
)
from .model import FeasiblePoint, SdpProblem, normalize_objective
from .solver import SolveResult, TraceRecord, solve

__all__ = [
    "DegenerateObjectiveError",
    "FeasiblePoint",
    "GeometryError",
    "InvariantError",
    "IterationBudgetExceeded",
    "ParseError",
    "RankDeficiencyError",
    "RepresentationError",
    "SdpError",
    "SdpProblem",
    "SingularMatrixError",
    "SolveResult",
    "TraceRecord",
    "ValidationError",
    "normalize_objective",
    "solve",
]
