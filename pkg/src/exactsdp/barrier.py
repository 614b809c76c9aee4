"""Log-det barrier geometry on the feasible affine subspace.

Only derivatives of ``-ln det X`` are ever needed: the gradient
``-pi(X^-1)``, the Hessian ``Y -> pi(X^-1 Y X^-1)`` on the kernel, its inverse
applied to a kernel element, and the local norm
``||Y||_X^2 = trace(X^-1 Y X^-1 Y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from . import linalg as la
from .errors import GeometryError, InvariantError, SingularMatrixError
from .model import SdpProblem


@dataclass(frozen=True)
class LocalGeometry:
    X: la.Matrix
    Xinv: la.Matrix

    @classmethod
    def at(cls, X, check_pd: bool = True) -> "LocalGeometry":
        if check_pd:
            pd = la.ldl_pd_check(X)
            if not pd:
                raise GeometryError(f"point is not positive definite: LDL pivot {pd.index} = {pd.pivot}")
        return cls(X, la.invert_symmetric(X))


@dataclass(frozen=True)
class NewtonSystem:
    """``M y = v`` with ``M_ij = tr(X A_i X A_j)``, ``v_i = -b_i + eta tr(A_i X C X)``."""

    M: la.Matrix
    v: List[Fraction]

    def solve(self) -> List[Fraction]:
        return la.gauss_solve(self.M, self.v)


def _square_trace(Z) -> Fraction:
    n = len(Z)
    return sum((Z[i][k] * Z[k][i] for i in range(n) for k in range(n)), la.ZERO)


def _cross_trace(Z, W) -> Fraction:
    n = len(Z)
    return sum((Z[i][k] * W[k][i] for i in range(n) for k in range(n)), la.ZERO)


def _assert_in_kernel(problem: SdpProblem, Y, what: str):
    res = problem.apply_A(Y)
    for j, value in enumerate(res):
        if value:
            raise InvariantError(f"{what} is not in the constraint kernel: <A_{j + 1}, .> = {value}")


class NewtonPieces:
    """Everything about the projected Newton direction at one point ``X``.

    The direction for ``f_eta = eta <cost, X> - ln det X`` is affine in eta,
    ``n_eta = P + eta Q`` with ``P = X + X (A^* y0) X`` and
    ``Q = X (A^* y1) X - X cost X``, where ``M y0 = -b`` and ``M y1 = w``,
    ``w_i = tr(A_i X cost X)``.  One factorisation of ``M`` serves both, and
    the squared local norm is a quadratic in eta.

    Since ``n_eta`` solves ``H n = -grad`` on the kernel,
    ``||n||_X^2 = <X^-1, n> - eta <cost, n>``, and ``tr(X^-1 P) = n + y0.b``,
    ``tr(X^-1 Q) = y1.b - <cost, X>``; so no inverse of ``X`` is needed.
    """

    def __init__(self, problem: SdpProblem, X, cost, check_pd: bool = True):
        self.problem = problem
        if check_pd:
            pd = la.ldl_pd_check(X)
            if not pd:
                raise GeometryError(f"point is not positive definite: LDL pivot {pd.index} = {pd.pivot}")
        self._X = X
        self._geometry = None
        XAX = [la.sandwich(X, A) for A in problem.A_list]
        M = [[la.inner(XAXi, Aj) for Aj in problem.A_list] for XAXi in XAX]
        if not la.is_symmetric(M):
            raise InvariantError("Newton system matrix is not symmetric")
        XCX = la.sandwich(X, cost)
        w = [la.inner(A, XCX) for A in problem.A_list]
        self.M = M
        self.w = w
        try:
            y0, y1 = la.solve_columns(M, [[-bj for bj in problem.b], w]) if M else ([], [])
        except SingularMatrixError as exc:
            raise InvariantError(
                f"Newton system is singular at stage {exc.stage}; constraint matrices must be independent"
            ) from exc
        P = la.copy(X)
        Q = la.scale(-1, XCX)
        for coef0, coef1, T in zip(y0, y1, XAX):
            P = la.axpy(coef0, T, P)
            Q = la.axpy(coef1, T, Q)
        _assert_in_kernel(problem, P, "Newton direction (centering part)")
        _assert_in_kernel(problem, Q, "Newton direction (cost part)")
        self.P = P
        self.Q = Q
        yb0 = sum((yj * bj for yj, bj in zip(y0, problem.b)), la.ZERO)
        yb1 = sum((yj * bj for yj, bj in zip(y1, problem.b)), la.ZERO)
        cP = la.inner(cost, P)
        cQ = la.inner(cost, Q)
        # ||P + eta Q||_X^2 = c0 + c1 eta + c2 eta^2
        self._coeffs = (len(X) + yb0, yb1 - la.inner(cost, X) - cP, -cQ)

    @property
    def geometry(self) -> LocalGeometry:
        if self._geometry is None:
            self._geometry = LocalGeometry(self._X, la.invert_symmetric(self._X))
        return self._geometry

    def norm_traces(self):
        """``(tr(ZP^2), tr(ZP ZQ), tr(ZQ^2))`` with ``Z = X^-1``, computed directly.

        Only used to cross-check the closed form of :meth:`proximity_sq`.
        """
        Xinv = self.geometry.Xinv
        ZP = la.matmul(Xinv, self.P)
        ZQ = la.matmul(Xinv, self.Q)
        return _square_trace(ZP), _cross_trace(ZP, ZQ), _square_trace(ZQ)

    @property
    def X(self):
        return self._X

    def system(self, eta) -> NewtonSystem:
        return NewtonSystem(self.M, [-bj + eta * wj for bj, wj in zip(self.problem.b, self.w)])

    def direction(self, eta) -> la.Matrix:
        return la.axpy(eta, self.Q, self.P)

    def proximity_sq(self, eta) -> Fraction:
        """``||n_eta(X)||_X^2``, exactly."""
        c0, c1, c2 = self._coeffs
        return c0 + eta * (c1 + eta * c2)

    def cost_norm_sq(self) -> Fraction:
        """``||H(X)^-1 cost||_X^2``."""
        return self._coeffs[2]


def gradient(problem: SdpProblem, X) -> la.Matrix:
    """``-pi(X^-1)``."""
    geom = LocalGeometry.at(X)
    return la.scale(-1, problem.project(geom.Xinv))


def newton_direction(problem: SdpProblem, X, eta, C) -> la.Matrix:
    return NewtonPieces(problem, X, C).direction(eta)


def hessian_solve(problem: SdpProblem, X, Chat, geometry: Optional[LocalGeometry] = None) -> la.Matrix:
    """The kernel element ``W`` with ``pi(X^-1 W X^-1) = Chat``.

    ``W = X Chat X + X (A^* y) X`` where ``M y = -v'``, ``v'_i = tr(A_i X Chat X)``.
    """
    _assert_in_kernel(problem, Chat, "hessian_solve right-hand side")
    geometry = geometry or LocalGeometry.at(X)
    X = geometry.X
    XAX = [la.sandwich(X, A) for A in problem.A_list]
    M = [[la.inner(T, Aj) for Aj in problem.A_list] for T in XAX]
    XCX = la.sandwich(X, Chat)
    rhs = [-la.inner(A, XCX) for A in problem.A_list]
    y = la.gauss_solve(M, rhs) if M else []
    W = XCX
    for yj, T in zip(y, XAX):
        W = la.axpy(yj, T, W)
    _assert_in_kernel(problem, W, "hessian_solve result")
    return W


def hessian_apply(problem: SdpProblem, X, Y, geometry: Optional[LocalGeometry] = None) -> la.Matrix:
    """``pi(X^-1 Y X^-1)``."""
    geometry = geometry or LocalGeometry.at(X)
    return problem.project(la.sandwich(geometry.Xinv, Y))


def local_norm_sq(problem: Optional[SdpProblem], X, Y, Xinv=None) -> Fraction:
    """``trace(X^-1 Y X^-1 Y)`` for a kernel element ``Y``.

    Pass ``problem=None`` to skip the kernel membership check.
    """
    if problem is not None:
        res = problem.apply_A(Y)
        if any(res):
            raise ValueError("local_norm_sq: Y is not in the constraint kernel")
    if Xinv is None:
        Xinv = LocalGeometry.at(X).Xinv
    return _square_trace(la.matmul(Xinv, Y))
