"""Rational bounds along the central path and the rounding tolerances.

Irrational constants are replaced by rational bounds that keep every
inequality valid: ``sqrt(n) -> ceil(sqrt(n))``, ``1/(1 - 1/e) -> 8/5`` and
Frobenius norms by :func:`~exactsdp.rational.sqrt_upper`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg as la
from .errors import DegenerateObjectiveError
from .model import SdpProblem
from .rational import isqrt_ceil, sqrt_lower, sqrt_upper

KAPPA = Fraction(8, 5)  # >= e / (e - 1) = 1.5819...
ROUNDING_CONSTANT = 17  # >= 31 * 16 / 30


def s0_inner(X0, C) -> Fraction:
    """``<X0, C + 2 ||C||_inf I>`` with the max-row-sum norm."""
    return la.inner(X0, C) + 2 * la.max_row_sum(C) * la.trace(X0)


def dual_norm_bound(eta, S0_inner, n: int, r) -> Fraction:
    """Rational upper bound on the Frobenius norm of the dual slack at ``eta``."""
    eta = Fraction(eta)
    r = Fraction(r)
    if eta <= 0 or r <= 0:
        raise ValueError("dual_norm_bound needs eta > 0 and r > 0")
    return isqrt_ceil(n) * KAPPA * (Fraction(S0_inner) + n / (r * eta * eta)) / r


def nu_lower(problem: SdpProblem) -> Fraction:
    """``1 / (18 n (1 + R/r))``: the phase-1 stopping value of nu."""
    return 1 / (18 * problem.n * (1 + problem.R / problem.r))


def rounding_tolerance_phase1(problem: SdpProblem, gstar=None) -> Fraction:
    n, r = problem.n, problem.r
    if gstar is None:
        gstar = problem.project(la.invert_symmetric(problem.X0))
    X0 = problem.X0
    inner = -la.inner(X0, gstar) + 2 * la.max_row_sum(gstar) * la.trace(X0)
    path_term = n * (18 * n * (1 + problem.R / r)) ** 2 / r
    inv_eps1 = ROUNDING_CONSTANT * isqrt_ceil(n) * KAPPA / r * (inner + path_term)
    return 1 / inv_eps1


def rounding_tolerance_phase2(problem: SdpProblem, eta_lo_sq: Optional[Fraction] = None) -> Fraction:
    """Phase-2 tolerance from input data only.

    ``eta_lo_sq`` is a lower bound on ``eta**2`` over the phase; by default
    ``r^2 ||C||_F^2 / 36``, which reproduces the ``36 n / (r^3 ||C||_F^2)``
    term.  ``problem.C`` is expected to be already projected onto the kernel.
    """
    n, r, C = problem.n, problem.r, problem.C
    c_sq = la.frobenius_sq(C)
    if c_sq == 0:
        raise DegenerateObjectiveError("objective is constant on the feasible set")
    if eta_lo_sq is None:
        eta_lo_sq = r * r * c_sq / 36
    S0 = la.axpy(2 * la.max_row_sum(C), la.identity(n), C)
    x0_norm = sqrt_upper(la.frobenius_sq(problem.X0))
    s0_norm = sqrt_upper(la.frobenius_sq(S0))
    s = isqrt_ceil(n)
    bracket = (problem.R + x0_norm) * s0_norm + n / (r * eta_lo_sq)
    inv_eps2 = ROUNDING_CONSTANT * s**3 * KAPPA / (r * problem.epsilon) * bracket
    return 1 / inv_eps2


@dataclass(frozen=True)
class PathBounds:
    nu_lo: Fraction
    nu_hi: Fraction
    eta_lo: Optional[Fraction]
    eta_hi: Fraction
    eps1: Fraction
    eps2: Optional[Fraction]
    eps_bar: Fraction
    theta_f: int
    sqrt_theta_ceil: int


def path_bounds(problem: SdpProblem, gstar=None) -> PathBounds:
    """All tolerances for a problem whose objective is already projected.

    With a zero objective only the phase-1 quantities are meaningful.
    """
    n = problem.n
    eps1 = rounding_tolerance_phase1(problem, gstar)
    c_sq = la.frobenius_sq(problem.C)
    if c_sq:
        eps2 = rounding_tolerance_phase2(problem)
        eta_lo = problem.r * sqrt_lower(c_sq) / 6
    else:
        eps2 = None
        eta_lo = None
    return PathBounds(
        nu_lo=nu_lower(problem),
        nu_hi=Fraction(1),
        eta_lo=eta_lo,
        eta_hi=n / problem.epsilon,
        eps1=eps1,
        eps2=eps2,
        eps_bar=eps1 if eps2 is None else min(eps1, eps2),
        theta_f=n,
        sqrt_theta_ceil=isqrt_ceil(n),
    )
