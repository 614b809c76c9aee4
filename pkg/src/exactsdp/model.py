"""SDP instance data, the constraint operator and kernel coordinates.

An instance is ``min <C, X>`` subject to ``<A_j, X> = b_j`` and ``X >= 0``,
together with a strictly feasible rational ``X0`` and radii ``0 < r <= R``
such that the feasible set contains the ball of radius ``r`` around ``X0``
and lies inside the ball of radius ``R`` (both within the affine hull).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import List, Sequence, Tuple

from . import linalg as la
from .errors import RankDeficiencyError, RepresentationError, ValidationError
from .rational import format_rational


@dataclass(frozen=True)
class SdpProblem:
    C: la.Matrix
    A_list: Tuple[la.Matrix, ...]
    b: Tuple[Fraction, ...]
    X0: la.Matrix
    r: Fraction
    R: Fraction
    epsilon: Fraction
    validated: bool = field(default=False, compare=False, repr=False)

    @classmethod
    def build(cls, C, A_list, b, X0, r, R, epsilon, validate=True) -> "SdpProblem":
        problem = cls(
            C=la.to_matrix(C),
            A_list=tuple(la.to_matrix(A) for A in A_list),
            b=tuple(Fraction(x) for x in b),
            X0=la.to_matrix(X0),
            r=Fraction(r),
            R=Fraction(R),
            epsilon=Fraction(epsilon),
        )
        if validate:
            problem.validate()
        return problem

    @property
    def n(self) -> int:
        return len(self.X0)

    @property
    def m(self) -> int:
        return len(self.A_list)

    @property
    def d(self) -> int:
        return self.n * (self.n + 1) // 2 - self.m

    @cached_property
    def projector(self) -> la.KernelProjector:
        return la.KernelProjector(self.A_list, self.n)

    @cached_property
    def basis(self) -> la.OrthoBasis:
        return la.nullspace_orthobasis(self.A_list, self.n)

    def validate(self) -> "SdpProblem":
        """Check every hypothesis of the method exactly; raise on the first failure."""
        n = self.n
        if n < 1:
            raise ValidationError("n must be at least 1")
        named = [("C", self.C), ("X0", self.X0)] + [(f"A_{j + 1}", A) for j, A in enumerate(self.A_list)]
        for name, M in named:
            if len(M) != n or any(len(row) != n for row in M):
                raise ValidationError(f"{name} is not {n}x{n}")
            if not la.is_symmetric(M):
                raise ValidationError(f"{name} is not symmetric")
        if len(self.b) != self.m:
            raise ValidationError(f"b has {len(self.b)} entries but there are {self.m} constraint matrices")
        if not 0 < self.r:
            raise ValidationError(f"r must be positive, got {format_rational(self.r)}")
        if not self.r <= self.R:
            raise ValidationError(f"need r <= R, got r = {format_rational(self.r)}, R = {format_rational(self.R)}")
        if not self.epsilon > 0:
            raise ValidationError(f"epsilon must be positive, got {format_rational(self.epsilon)}")
        try:
            self.projector
        except RankDeficiencyError as exc:
            raise ValidationError(f"A is not surjective: {exc}") from exc
        for j, (A, bj) in enumerate(zip(self.A_list, self.b)):
            lhs = la.inner(A, self.X0)
            if lhs != bj:
                raise ValidationError(
                    f"<A_{j + 1},X0> != b_{j + 1}: {format_rational(lhs)} != {format_rational(bj)}"
                )
        pd = la.ldl_pd_check(self.X0)
        if not pd:
            raise ValidationError(f"X0 not positive definite: LDL pivot {pd.index} = {format_rational(pd.pivot)}")
        object.__setattr__(self, "validated", True)
        return self

    # constraint operator

    def apply_A(self, X) -> List[Fraction]:
        if len(X) != self.n or any(len(row) != self.n for row in X):
            raise ValueError(f"expected a {self.n}x{self.n} matrix")
        return self.projector.apply_A(X)

    def apply_Astar(self, y) -> la.Matrix:
        return self.projector.apply_Astar(list(y))

    def project(self, Y) -> la.Matrix:
        return self.projector.project(Y)

    def with_objective(self, C) -> "SdpProblem":
        """Copy with another cost matrix, sharing the cached subspace data."""
        new = dataclasses.replace(self, C=C)
        for name in ("projector", "basis"):
            if name in self.__dict__:
                new.__dict__[name] = self.__dict__[name]
        object.__setattr__(new, "validated", self.validated)
        return new

    # kernel coordinates

    def coords_to_matrix(self, coords: Sequence[Fraction]) -> la.Matrix:
        if len(coords) != self.d:
            raise ValueError(f"expected {self.d} coordinates, got {len(coords)}")
        X = la.copy(self.X0)
        for x, B in zip(coords, self.basis.elements):
            if x:
                X = la.axpy(x, B, X)
        return X

    def matrix_to_coords(self, X) -> List[Fraction]:
        residual = [ax - bj for ax, bj in zip(self.apply_A(X), self.b)]
        for j, res in enumerate(residual):
            if res:
                raise RepresentationError(
                    f"X - X0 is not in the constraint kernel: residual {format_rational(res)} at constraint {j + 1}"
                )
        if not la.is_symmetric(X):
            raise RepresentationError("X is not symmetric")
        delta = la.sub(X, self.X0)
        return [la.inner(delta, B) / nsq for B, nsq in zip(self.basis.elements, self.basis.normsq)]

    def kernel_coords(self, Y) -> List[Fraction]:
        """Coordinates of a kernel element ``Y`` (no ``X0`` offset)."""
        return [la.inner(Y, B) / nsq for B, nsq in zip(self.basis.elements, self.basis.normsq)]

    def point(self, coords) -> "FeasiblePoint":
        coords = tuple(Fraction(x) for x in coords)
        return FeasiblePoint(coords, self.coords_to_matrix(coords))

    def point_from_matrix(self, X) -> "FeasiblePoint":
        X = la.to_matrix(X)
        return FeasiblePoint(tuple(self.matrix_to_coords(X)), X)

    def start_point(self) -> "FeasiblePoint":
        return FeasiblePoint(tuple([Fraction(0)] * self.d), la.copy(self.X0))

    def objective(self, X) -> Fraction:
        return la.inner(self.C, X)


@dataclass(frozen=True)
class FeasiblePoint:
    """``X = X0 + sum_i coords[i] * B_i``; the coordinates are authoritative."""

    coords: Tuple[Fraction, ...]
    matrix: la.Matrix = field(compare=False)


def normalize_objective(problem: SdpProblem) -> tuple[SdpProblem, Fraction]:
    """Replace ``C`` by its kernel projection.

    Returns the new problem and the constant ``<C - pi(C), X0>`` which,
    added to ``<pi(C), X>``, reproduces ``<C, X>`` on the feasible set.
    """
    PC = problem.project(problem.C)
    offset = la.inner(la.sub(problem.C, PC), problem.X0)
    return problem.with_objective(PC), offset


def coords_to_matrix(problem: SdpProblem, coords) -> la.Matrix:
    return problem.coords_to_matrix(coords)


def matrix_to_coords(problem: SdpProblem, X) -> List[Fraction]:
    return problem.matrix_to_coords(X)


def apply_A(problem: SdpProblem, X) -> List[Fraction]:
    return problem.apply_A(X)


def apply_Astar(problem: SdpProblem, y) -> la.Matrix:
    return problem.apply_Astar(y)
