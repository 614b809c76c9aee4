"""Two-phase short-step barrier method with Diophantine rounding.

Phase 1 follows the auxiliary central path through ``X0`` (cost
``pi(X0^-1)``, parameter ``nu`` decreasing from 1) towards the analytic
centre.  Phase 2 follows the central path of the projected objective with
``eta`` increasing until ``n / eta <= epsilon``.  Each iteration takes a
Newton step, an extra centering step, then rounds the kernel coordinates of
the iterate by continued fractions.  Every invariant is checked in exact
arithmetic and each iteration emits a :class:`TraceRecord`.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional

from . import linalg as la
from .barrier import NewtonPieces, hessian_solve
from .central_path import PathBounds, nu_lower, path_bounds, rounding_tolerance_phase2
from .diophantine import approx_vector, vector_size_bound
from .errors import DegenerateObjectiveError, InvariantError, IterationBudgetExceeded, RepresentationError
from .model import FeasiblePoint, SdpProblem, normalize_objective
from .rational import (
    bit_size_matrix,
    bit_size_vector,
    ceil_fraction,
    floor_log2,
    format_rational,
    isqrt_ceil,
    ln_upper,
    sqrt_upper,
)

log = logging.getLogger(__name__)

LOOP_TOP_BOUND = Fraction(1, 16)
CENTERED_BOUND = Fraction(1, 1024)
ROUNDED_BOUND = Fraction(1, 81)
MAX_HALVINGS = 64


@dataclass(frozen=True)
class PhaseConfig:
    phase: int
    cost: la.Matrix = field(repr=False)
    eta1: Fraction
    theta: Fraction
    target: Fraction
    direction: str

    def finished(self, eta: Fraction, n: int) -> bool:
        if self.direction == "decreasing":
            return eta <= self.target
        return n <= self.target * eta


@dataclass
class PathState:
    k: int
    eta: Fraction
    point: FeasiblePoint
    proximity_sq: Fraction


@dataclass(frozen=True)
class TraceRecord:
    k: int
    phase: int
    eta: Fraction
    coord_bitsize: int
    matrix_bitsize: int
    proximity_sq: Fraction
    proximity_top_sq: Fraction
    rounded: bool
    eps_bar_used: Fraction
    size_bound: Optional[int]
    unrounded_coord_bitsize: int
    halvings: int = 0
    centered_sq: Optional[Fraction] = None

    def to_json(self) -> dict:
        out = asdict(self)
        for key, value in out.items():
            if isinstance(value, Fraction):
                out[key] = format_rational(value)
        return out


@dataclass(frozen=True)
class RoundedIterate:
    point: FeasiblePoint
    pieces: NewtonPieces
    eps_bar: Fraction
    proximity_sq: Fraction
    size_bound: int
    halvings: int


@dataclass
class PhaseResult:
    config: PhaseConfig
    point: FeasiblePoint
    pieces: NewtonPieces
    eta_final: Fraction
    iterations: int
    trace: List[TraceRecord]
    iterates: List[FeasiblePoint]
    stopped_early: bool = False


@dataclass
class SolveResult:
    X_star: FeasiblePoint
    objective: Fraction
    offset: Fraction
    gap_bound: Fraction
    eta_final: Optional[Fraction]
    iterations: dict
    trace: List[TraceRecord]
    bounds: Optional[PathBounds]
    eta1: Optional[Fraction] = None
    phase2_start_proximity_sq: Optional[Fraction] = None
    phase1: Optional[PhaseResult] = None
    phase2: Optional[PhaseResult] = None
    degenerate: bool = False

    @property
    def iterates(self) -> List[FeasiblePoint]:
        out = []
        for ph in (self.phase1, self.phase2):
            if ph is not None:
                out.extend(ph.iterates)
        return out


def sqrt_theta_ceil(n: int) -> int:
    return isqrt_ceil(n)


def phase1_theta(n: int) -> Fraction:
    return 1 - Fraction(1, 8 * sqrt_theta_ceil(n))


def phase2_theta(n: int) -> Fraction:
    return 1 + Fraction(1, 8 * sqrt_theta_ceil(n))


def rounding_size_bound(d: int, R: Fraction, eps_bar: Fraction) -> int:
    """``d (6 + ceil(log2(d^2 ceil(2R) / eps_bar^2)))``."""
    return vector_size_bound(d, ceil_fraction(2 * R), eps_bar)


def centering_bound(delta_sq: Fraction) -> Optional[Fraction]:
    """Upper bound on the squared proximity after one full Newton step.

    With ``delta = ||n(x)||_x < 1`` the step gives
    ``||n(x+)||_x+ <= (delta / (1 - delta))^2``.  ``delta`` is replaced by a
    rational upper bound.  Returns None when no bound below 1 is available.
    """
    u = sqrt_upper(delta_sq, Fraction(1, 64))
    if u >= 1:
        return None
    return (u / (1 - u)) ** 4


def iteration_budget(config: PhaseConfig, n: int) -> int:
    """Short-step iteration bound ``ceil(10 ceil(sqrt n) ln(...)) + 1``.

    Phase 1: ``ln(7 / (6 eps'))``; phase 2: ``ln(7 n / (6 eta1 epsilon))``.
    """
    s = sqrt_theta_ceil(n)
    if config.direction == "decreasing":
        arg = Fraction(7) / (6 * config.target)
    else:
        arg = Fraction(7 * n) / (6 * config.eta1 * config.target)
    if arg <= 1:
        return 1
    return ceil_fraction(10 * s * ln_upper(arg)) + 1


def initial_eta(problem: SdpProblem, x1: FeasiblePoint, C) -> Fraction:
    """Largest power of two at most ``1 / (12 ||H(x1)^-1 C||_x1)``."""
    W = hessian_solve(problem, x1.matrix, C)
    s = la.inner(C, W)
    if s <= 0:
        raise DegenerateObjectiveError("objective is constant on the feasible set")
    u = sqrt_upper(s)
    return Fraction(2) ** floor_log2(1 / (12 * u))


def _assert_feasible(problem: SdpProblem, X, what: str):
    for j, (ax, bj) in enumerate(zip(problem.apply_A(X), problem.b)):
        if ax != bj:
            raise InvariantError(f"{what}: feasibility residual {format_rational(ax - bj)} at constraint {j + 1}")


def _coords(problem: SdpProblem, X, what: str) -> List[Fraction]:
    try:
        return problem.matrix_to_coords(X)
    except RepresentationError as exc:
        raise InvariantError(f"{what}: {exc}") from exc


def round_iterate(
    problem: SdpProblem,
    point: FeasiblePoint,
    eta: Fraction,
    cost,
    eps_bar: Fraction,
    max_halvings: int = MAX_HALVINGS,
) -> RoundedIterate:
    """Round kernel coordinates to within ``eps_bar`` (Euclidean).

    After rounding the point must be positive definite with
    ``||n_eta||^2 <= 1/81``; otherwise ``eps_bar`` is halved and rounding
    repeated.
    """
    two_R = 2 * problem.R
    for i, x in enumerate(point.coords):
        if abs(x) > two_R:
            raise InvariantError(
                f"coordinate {i + 1} = {float(x):.6g} exceeds 2R; the feasible set is not inside the R-ball",
                state={"coords": point.coords},
            )
    eps = eps_bar
    for halving in range(max_halvings + 1):
        coords = approx_vector(point.coords, eps)
        candidate = problem.point(coords)
        pd = la.ldl_pd_check(candidate.matrix)
        if pd:
            pieces = NewtonPieces(problem, candidate.matrix, cost, check_pd=False)
            prox = pieces.proximity_sq(eta)
            if prox <= ROUNDED_BOUND:
                bound = rounding_size_bound(problem.d, problem.R, eps)
                size = bit_size_vector(coords)
                if size > bound:
                    raise InvariantError(
                        f"rounded coordinates use {size} bits, above the bound {bound}",
                        state={"coords": coords, "eps_bar": eps},
                    )
                return RoundedIterate(candidate, pieces, eps, prox, bound, halving)
            log.debug("rounding at eps=%s gave proximity %s; halving", eps, float(prox))
        else:
            log.debug("rounding at eps=%s lost definiteness (pivot %s); halving", eps, pd.index)
        eps = eps / 2
    raise InvariantError(
        f"rounding failed after {max_halvings} halvings of the tolerance",
        state={"coords": point.coords, "eta": eta, "eps_bar": eps_bar},
    )


def short_step(
    problem: SdpProblem,
    config: PhaseConfig,
    x1: FeasiblePoint,
    eps_bar: Fraction,
    *,
    rounding: bool = True,
    max_iters: Optional[int] = None,
    centering: str = "bound",
    keep_iterates: bool = False,
    callback: Optional[Callable[[TraceRecord], bool]] = None,
    pieces: Optional[NewtonPieces] = None,
) -> PhaseResult:
    """Run one phase of the short-step method from ``x1``.

    ``centering`` selects how the ``1/1024`` proximity after the extra
    centering step is checked: ``"bound"`` certifies it from the proximity
    before that step (falling back to ``"exact"`` if the certificate is too
    weak), ``"exact"`` recomputes the Newton system at the centred point,
    ``"off"`` skips it.

    ``callback`` receives every trace record; returning True stops the
    phase early.
    """
    if centering not in ("bound", "exact", "off"):
        raise ValueError(f"unknown centering mode {centering!r}")
    n = problem.n
    cost = config.cost
    budget = iteration_budget(config, n)
    if max_iters is not None:
        budget = min(budget, max_iters)
    point = x1
    if pieces is None:
        pieces = NewtonPieces(problem, point.matrix, cost)
    eta = config.eta1
    prox = pieces.proximity_sq(eta)
    state = PathState(1, eta, point, prox)
    trace: List[TraceRecord] = []
    iterates: List[FeasiblePoint] = [point] if keep_iterates else []
    stopped = False
    while not config.finished(state.eta, n):
        k, eta = state.k, state.eta
        if k > budget:
            raise IterationBudgetExceeded(
                f"phase {config.phase} exceeded its budget of {budget} iterations",
                state={"k": k, "eta": eta},
            )
        top = pieces.proximity_sq(eta)
        if top > LOOP_TOP_BOUND:
            raise InvariantError(
                f"phase {config.phase}, iteration {k}: loop-top proximity {float(top):.6g} > 1/16",
                state={"k": k, "eta": eta, "proximity_sq": top},
            )
        X_plus = la.add(pieces.X, pieces.direction(eta))
        _assert_feasible(problem, X_plus, f"phase {config.phase}, iteration {k}, Newton step")
        pieces_plus = NewtonPieces(problem, X_plus, cost)
        X_next = la.add(X_plus, pieces_plus.direction(eta))
        _assert_feasible(problem, X_next, f"phase {config.phase}, iteration {k}, centering step")
        coords_next = _coords(problem, X_next, f"phase {config.phase}, iteration {k}")
        unrounded = FeasiblePoint(tuple(coords_next), X_next)
        centered = None
        c_prox = None
        if rounding and centering == "bound":
            c_prox = centering_bound(pieces_plus.proximity_sq(eta))
        weak = c_prox is None or c_prox > CENTERED_BOUND
        if not rounding or centering == "exact" or (centering == "bound" and weak):
            centered = NewtonPieces(problem, X_next, cost)
            c_prox = centered.proximity_sq(eta)
        if rounding and c_prox is not None and c_prox > CENTERED_BOUND:
            raise InvariantError(
                f"phase {config.phase}, iteration {k}: proximity after centering {float(c_prox):.6g} > 1/1024",
                state={"k": k, "eta": eta},
            )
        if rounding:
            rounded = round_iterate(problem, unrounded, eta, cost, eps_bar)
            point, pieces, prox = rounded.point, rounded.pieces, rounded.proximity_sq
            eps_used, size_bound, halvings = rounded.eps_bar, rounded.size_bound, rounded.halvings
        else:
            point, pieces = unrounded, centered
            prox = pieces.proximity_sq(eta)
            eps_used, size_bound, halvings = eps_bar, None, 0
        _assert_feasible(problem, point.matrix, f"phase {config.phase}, iteration {k}, iterate")
        if prox > ROUNDED_BOUND:
            raise InvariantError(
                f"phase {config.phase}, iteration {k}: proximity {float(prox):.6g} > 1/81 after the step",
                state={"k": k, "eta": eta},
            )
        record = TraceRecord(
            k=k,
            phase=config.phase,
            eta=eta,
            coord_bitsize=bit_size_vector(point.coords),
            matrix_bitsize=bit_size_matrix(point.matrix),
            proximity_sq=prox,
            proximity_top_sq=top,
            rounded=rounding,
            eps_bar_used=eps_used,
            size_bound=size_bound,
            unrounded_coord_bitsize=bit_size_vector(coords_next),
            halvings=halvings,
            centered_sq=c_prox,
        )
        trace.append(record)
        if keep_iterates:
            iterates.append(point)
        log.debug("phase %d k=%d eta=%s prox=%.3g bits=%d", config.phase, k, float(eta), float(prox), record.coord_bitsize)
        state = PathState(k + 1, eta * config.theta, point, prox)
        if callback is not None and callback(record):
            stopped = True
            break
    return PhaseResult(
        config=config,
        point=state.point,
        pieces=pieces,
        eta_final=state.eta,
        iterations=state.k - 1,
        trace=trace,
        iterates=iterates,
        stopped_early=stopped,
    )


def phase1_config(problem: SdpProblem, gstar=None) -> PhaseConfig:
    if gstar is None:
        gstar = problem.project(la.invert_symmetric(problem.X0))
    return PhaseConfig(
        phase=1,
        cost=gstar,
        eta1=Fraction(1),
        theta=phase1_theta(problem.n),
        target=nu_lower(problem),
        direction="decreasing",
    )


def phase2_config(problem: SdpProblem, eta1: Fraction) -> PhaseConfig:
    return PhaseConfig(
        phase=2,
        cost=problem.C,
        eta1=eta1,
        theta=phase2_theta(problem.n),
        target=problem.epsilon,
        direction="increasing",
    )


def solve(
    problem: SdpProblem,
    *,
    rounding: bool = True,
    max_iters: Optional[int] = None,
    phase1_only: bool = False,
    keep_iterates: bool = False,
    centering: str = "bound",
    callback: Optional[Callable[[TraceRecord], bool]] = None,
) -> SolveResult:
    """Compute a rational feasible ``X*`` with ``n / eta_final <= epsilon``."""
    if not problem.validated:
        problem.validate()
    normalized, offset = normalize_objective(problem)
    n = problem.n
    degenerate = la.is_zero(normalized.C)
    if degenerate and not phase1_only:
        X0 = problem.start_point()
        return SolveResult(
            X_star=X0,
            objective=la.inner(problem.C, X0.matrix),
            offset=offset,
            gap_bound=Fraction(0),
            eta_final=None,
            iterations={"phase1": 0, "phase2": 0},
            trace=[],
            bounds=None,
            degenerate=True,
        )
    gstar = normalized.project(la.invert_symmetric(normalized.X0))
    bounds = path_bounds(normalized, gstar)
    x1 = normalized.start_point()
    config1 = phase1_config(normalized, gstar)
    pieces0 = NewtonPieces(normalized, x1.matrix, config1.cost)
    if not la.is_zero(pieces0.direction(config1.eta1)):
        raise InvariantError("phase-1 Newton direction at X0 with nu = 1 is not zero")
    log.info("phase 1: target nu %s, eps_bar %s", config1.target, float(bounds.eps_bar))
    ph1 = short_step(
        normalized,
        config1,
        x1,
        bounds.eps_bar,
        rounding=rounding,
        max_iters=max_iters,
        centering=centering,
        keep_iterates=keep_iterates,
        callback=callback,
        pieces=pieces0,
    )
    trace = list(ph1.trace)
    if phase1_only or ph1.stopped_early:
        eta1 = start_prox = None
        if not degenerate:
            eta1 = initial_eta(normalized, ph1.point, normalized.C)
            start_prox = NewtonPieces(normalized, ph1.point.matrix, normalized.C).proximity_sq(eta1)
        return SolveResult(
            X_star=ph1.point,
            objective=la.inner(problem.C, ph1.point.matrix),
            offset=offset,
            gap_bound=None,
            eta_final=ph1.eta_final,
            iterations={"phase1": ph1.iterations, "phase2": 0},
            trace=trace,
            bounds=bounds,
            eta1=eta1,
            phase2_start_proximity_sq=start_prox,
            phase1=ph1,
            degenerate=degenerate,
        )
    eta1 = initial_eta(normalized, ph1.point, normalized.C)
    eps_bar = bounds.eps_bar
    c_sq = la.frobenius_sq(normalized.C)
    if 36 * eta1 * eta1 < problem.r**2 * c_sq:
        # eta1 undershoots r ||C||_F / 6; use eta1 itself as the phase-2 lower bound
        eps_bar = min(bounds.eps1, rounding_tolerance_phase2(normalized, eta_lo_sq=eta1 * eta1))
    pieces1 = NewtonPieces(normalized, ph1.point.matrix, normalized.C)
    start_prox = pieces1.proximity_sq(eta1)
    if start_prox > LOOP_TOP_BOUND:
        raise InvariantError(
            f"phase-2 start proximity {float(start_prox):.6g} > 1/16 at eta1 = {eta1}",
            state={"eta1": eta1, "proximity_sq": start_prox},
        )
    config2 = phase2_config(normalized, eta1)
    log.info("phase 2: eta1 %s, target n/eta <= %s, eps_bar %s", eta1, problem.epsilon, float(eps_bar))
    ph2 = short_step(
        normalized,
        config2,
        ph1.point,
        eps_bar,
        rounding=rounding,
        max_iters=max_iters,
        centering=centering,
        keep_iterates=keep_iterates,
        callback=callback,
        pieces=pieces1,
    )
    trace.extend(ph2.trace)
    X_star = ph2.point
    objective = offset + la.inner(normalized.C, X_star.matrix)
    if objective != la.inner(problem.C, X_star.matrix):
        raise InvariantError("objective offset identity failed")
    return SolveResult(
        X_star=X_star,
        objective=objective,
        offset=offset,
        gap_bound=n / ph2.eta_final,
        eta_final=ph2.eta_final,
        iterations={"phase1": ph1.iterations, "phase2": ph2.iterations},
        trace=trace,
        bounds=bounds,
        eta1=eta1,
        phase2_start_proximity_sq=start_prox,
        phase1=ph1,
        phase2=ph2,
    )
