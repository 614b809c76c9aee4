"""Ready-made test instances."""

from __future__ import annotations

from fractions import Fraction

from . import linalg as la
from .model import SdpProblem


def min_eigenvalue(C, epsilon=Fraction(1, 100), r=None, R=Fraction(1)) -> SdpProblem:
    """``min <C, X>`` over trace-one PSD matrices; the optimum is lambda_min(C).

    ``X0 = I/n``.  Any kernel perturbation of Frobenius norm at most ``1/n``
    keeps ``X0`` positive semidefinite, and every trace-one PSD matrix is
    within distance ``sqrt(1 - 1/n) < 1`` of ``X0``.
    """
    C = la.to_matrix(C)
    n = len(C)
    if r is None:
        r = Fraction(1, n)
    return SdpProblem.build(
        C=C,
        A_list=[la.identity(n)],
        b=[1],
        X0=la.scale(Fraction(1, n), la.identity(n)),
        r=r,
        R=R,
        epsilon=epsilon,
    )


def cycle_edges(n: int):
    return [(i, (i + 1) % n) for i in range(n)]


def lovasz_theta(n: int, edges, epsilon=Fraction(1, 1000)) -> SdpProblem:
    """``min <-J, X>`` s.t. ``tr X = 1`` and ``X_ij = 0`` on edges.

    The optimal value is ``-theta(G)``.  ``X0 = I/n``, ``r = 1/n`` and
    ``R = 1`` (trace-one PSD matrices lie within ``sqrt(1 - 1/n)`` of ``X0``).
    """
    A_list = [la.identity(n)]
    b = [Fraction(1)]
    for i, j in edges:
        A_list.append(la.symmetric_unit(n, min(i, j), max(i, j)))
        b.append(Fraction(0))
    return SdpProblem.build(
        C=[[Fraction(-1)] * n for _ in range(n)],
        A_list=A_list,
        b=b,
        X0=la.scale(Fraction(1, n), la.identity(n)),
        r=Fraction(1, n),
        R=Fraction(1),
        epsilon=epsilon,
    )
