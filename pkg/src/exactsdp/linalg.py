"""Dense exact linear algebra over the rationals.

Matrices are plain row-major ``list[list[Fraction]]``; callers treat them as
immutable values and every function here returns fresh lists.  Symmetric
matrices are stored in full.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import RankDeficiencyError, SingularMatrixError

Matrix = List[List[Fraction]]
RatMatrix = Matrix
SymMatrix = Matrix
Vector = List[Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(rows: int, cols: Optional[int] = None) -> Matrix:
    cols = rows if cols is None else cols
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def diag(values) -> Matrix:
    values = [Fraction(v) for v in values]
    n = len(values)
    return [[values[i] if i == j else ZERO for j in range(n)] for i in range(n)]


def to_matrix(rows) -> Matrix:
    """Copy a nested sequence into a ``Fraction`` matrix."""
    return [[Fraction(x) for x in row] for row in rows]


def copy(M: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(row) for row in M]


def shape(M) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def transpose(M) -> Matrix:
    return [list(col) for col in zip(*M)]


def add(X, Y) -> Matrix:
    return [[a + b for a, b in zip(rx, ry)] for rx, ry in zip(X, Y)]


def sub(X, Y) -> Matrix:
    return [[a - b for a, b in zip(rx, ry)] for rx, ry in zip(X, Y)]


def scale(c, X) -> Matrix:
    return [[c * a for a in row] for row in X]


def axpy(c, X, Y) -> Matrix:
    """``c * X + Y``."""
    if c == 0:
        return copy(Y)
    return [[c * a + b for a, b in zip(rx, ry)] for rx, ry in zip(X, Y)]


def matmul(X, Y) -> Matrix:
    n_inner = len(Y)
    cols = len(Y[0]) if Y else 0
    out = []
    for row in X:
        acc = [ZERO] * cols
        for k in range(n_inner):
            a = row[k]
            if a:
                yk = Y[k]
                acc = [s + a * b for s, b in zip(acc, yk)]
        out.append(acc)
    return out


def matvec(M, v) -> Vector:
    return [sum((a * b for a, b in zip(row, v)), ZERO) for row in M]


def sandwich(X, Y) -> Matrix:
    """``X Y X`` for symmetric ``X`` and ``Y``, symmetrised exactly."""
    P = matmul(matmul(X, Y), X)
    n = len(P)
    for i in range(n):
        for j in range(i + 1, n):
            P[j][i] = P[i][j]
    return P


def trace(M) -> Fraction:
    return sum((M[i][i] for i in range(len(M))), ZERO)


def inner(X, Y) -> Fraction:
    """Trace inner product ``<X, Y> = trace(X^T Y)``."""
    total = ZERO
    for rx, ry in zip(X, Y):
        for a, b in zip(rx, ry):
            if a and b:
                total += a * b
    return total


def frobenius_sq(X) -> Fraction:
    return inner(X, X)


def trace_of_product(X, Y) -> Fraction:
    """``trace(X Y)`` without forming the product."""
    n = len(X)
    return sum((X[i][k] * Y[k][i] for i in range(n) for k in range(n)), ZERO)


def max_row_sum(M) -> Fraction:
    """Maximum absolute row sum norm."""
    return max((sum((abs(a) for a in row), ZERO) for row in M), default=ZERO)


def is_zero(M) -> bool:
    return all(a == 0 for row in M for a in row)


def is_symmetric(M) -> bool:
    n = len(M)
    if any(len(row) != n for row in M):
        return False
    return all(M[i][j] == M[j][i] for i in range(n) for j in range(i + 1, n))


# -- elimination ------------------------------------------------------------


def _row_to_integers(row: Sequence[Fraction]) -> List[int]:
    den = 1
    for a in row:
        den = den * a.denominator // math.gcd(den, a.denominator)
    return [int(a * den) for a in row]


def solve_columns(M, rhs_columns: Sequence[Sequence[Fraction]]) -> List[Vector]:
    """Solve ``M x = b`` exactly for every ``b`` in ``rhs_columns``.

    Rows are first scaled to integers; forward elimination is the
    fraction-free Bareiss scheme, so every intermediate entry is a minor of
    the scaled augmented matrix.  Back substitution is done in rationals.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("solve_columns needs a square matrix")
    k_rhs = len(rhs_columns)
    for b in rhs_columns:
        if len(b) != n:
            raise ValueError("right-hand side has the wrong length")
    if n == 0:
        return [[] for _ in range(k_rhs)]
    aug = [
        _row_to_integers([Fraction(x) for x in M[i]] + [Fraction(b[i]) for b in rhs_columns])
        for i in range(n)
    ]
    width = n + k_rhs
    prev = 1
    for k in range(n):
        pivot_row = None
        for i in range(k, n):
            if aug[i][k] != 0 and (
                pivot_row is None
                or abs(aug[i][k]).bit_length() < abs(aug[pivot_row][k]).bit_length()
            ):
                pivot_row = i
        if pivot_row is None:
            raise SingularMatrixError(f"matrix is singular: no nonzero pivot at stage {k + 1}", stage=k + 1)
        if pivot_row != k:
            aug[k], aug[pivot_row] = aug[pivot_row], aug[k]
        pk = aug[k]
        akk = pk[k]
        for i in range(k + 1, n):
            ri = aug[i]
            aik = ri[k]
            ri[k] = 0
            for j in range(k + 1, width):
                ri[j] = (akk * ri[j] - aik * pk[j]) // prev
        prev = akk
    solutions = []
    for c in range(k_rhs):
        x = [ZERO] * n
        for i in range(n - 1, -1, -1):
            row = aug[i]
            s = Fraction(row[n + c])
            for j in range(i + 1, n):
                if row[j]:
                    s -= row[j] * x[j]
            x[i] = s / row[i]
        solutions.append(x)
    return solutions


def gauss_solve(M, rhs) -> Vector:
    return solve_columns(M, [rhs])[0]


def invert(M) -> Matrix:
    n = len(M)
    cols = solve_columns(M, [[ONE if i == j else ZERO for i in range(n)] for j in range(n)])
    return transpose(cols)


def invert_symmetric(M) -> Matrix:
    inv = invert(M)
    n = len(inv)
    for i in range(n):
        for j in range(i + 1, n):
            inv[j][i] = inv[i][j]
    return inv


# -- positive definiteness ----------------------------------------------------


@dataclass(frozen=True)
class PDCheck:
    """Outcome of :func:`ldl_pd_check`; truthy iff positive definite.

    On failure ``index`` is the 1-based position of the first nonpositive
    pivot and ``pivot`` its value.
    """

    ok: bool
    index: Optional[int] = None
    pivot: Optional[Fraction] = None
    pivots: tuple = ()

    def __bool__(self):
        return self.ok


def ldl_pd_check(X) -> PDCheck:
    """Certify ``X > 0`` by LDL^T elimination without pivoting."""
    n = len(X)
    L = [[ZERO] * n for _ in range(n)]
    d: List[Fraction] = []
    for j in range(n):
        Lj = L[j]
        s = Fraction(X[j][j])
        for k in range(j):
            if Lj[k]:
                s -= Lj[k] * Lj[k] * d[k]
        if s <= 0:
            return PDCheck(False, j + 1, s, tuple(d))
        d.append(s)
        for i in range(j + 1, n):
            Li = L[i]
            t = Fraction(X[i][j])
            for k in range(j):
                if Li[k] and Lj[k]:
                    t -= Li[k] * Lj[k] * d[k]
            Li[j] = t / s
    return PDCheck(True, pivots=tuple(d))


# -- constraint subspace ------------------------------------------------------


def symmetric_unit(n: int, i: int, j: int) -> Matrix:
    """``E_ii`` when ``i == j``, otherwise ``E_ij + E_ji``."""
    E = zeros(n)
    E[i][j] = ONE
    E[j][i] = ONE
    return E


def _primitive(X) -> Matrix:
    # rescale by a positive rational to coprime integer entries
    den = 1
    for row in X:
        for a in row:
            den = den * a.denominator // math.gcd(den, a.denominator)
    ints = [[int(a * den) for a in row] for row in X]
    g = 0
    for row in ints:
        for a in row:
            g = math.gcd(g, a)
    g = g or 1
    return [[Fraction(a, g) for a in row] for row in ints]


def _dyadic_normalise(B) -> tuple[Matrix, Fraction]:
    nsq = frobenius_sq(B)
    # find k with 4**(k-1) < nsq <= 4**k, then divide B by 2**k
    k = 0
    while Fraction(4) ** k < nsq:
        k += 1
    while Fraction(4) ** (k - 1) >= nsq:
        k -= 1
    factor = Fraction(1, 2**k) if k >= 0 else Fraction(2 ** (-k))
    return scale(factor, B), nsq * factor * factor


@dataclass(frozen=True)
class OrthoBasis:
    """Pairwise orthogonal basis ``B_1..B_d`` of the constraint kernel."""

    dim: int
    elements: tuple
    normsq: tuple

    def __len__(self):
        return self.dim


def _orthogonalise(v, basis, basis_normsq):
    for u, nu in zip(basis, basis_normsq):
        c = inner(v, u)
        if c:
            v = axpy(-c / nu, u, v)
    return v


def nullspace_orthobasis(A_list: Sequence[Matrix], n: int) -> OrthoBasis:
    """Orthogonal basis of ``{X symmetric : <A_j, X> = 0 for all j}``.

    Gram-Schmidt in the trace inner product, seeded with the ``A_j`` and then
    the unit matrices of the symmetric space.  Each element is scaled by a
    power of two so that its squared norm lies in ``[1/4, 1]``.
    """
    span: List[Matrix] = []
    span_nsq: List[Fraction] = []
    for j, A in enumerate(A_list):
        v = _orthogonalise(to_matrix(A), span, span_nsq)
        if is_zero(v):
            raise RankDeficiencyError(
                f"constraint matrices are linearly dependent: A_{j + 1} lies in the span of the previous ones",
                stage=j + 1,
            )
        span.append(v)
        span_nsq.append(frobenius_sq(v))
    total = n * (n + 1) // 2
    d = total - len(A_list)
    if d < 0:
        raise RankDeficiencyError(f"{len(A_list)} constraints exceed dim S^{n} = {total}")
    candidates = [(i, i) for i in range(n)] + [(i, j) for i in range(n) for j in range(i + 1, n)]
    found: List[Matrix] = []
    for i, j in candidates:
        if len(found) == d:
            break
        v = _orthogonalise(symmetric_unit(n, i, j), span, span_nsq)
        if is_zero(v):
            continue
        v = _primitive(v)
        span.append(v)
        span_nsq.append(frobenius_sq(v))
        found.append(v)
    if len(found) != d:
        raise RankDeficiencyError("failed to complete the kernel basis")
    elements = []
    normsq = []
    for v in found:
        B, nsq = _dyadic_normalise(v)
        elements.append(B)
        normsq.append(nsq)
    return OrthoBasis(d, tuple(elements), tuple(normsq))


class KernelProjector:
    """Orthogonal projection onto the kernel of ``X -> (<A_j, X>)_j``.

    The Gram matrix ``A A^*`` is inverted once; :meth:`project` then costs
    ``m`` inner products and a matrix-vector product.
    """

    def __init__(self, A_list: Sequence[Matrix], n: int):
        self.A_list = [to_matrix(A) for A in A_list]
        self.n = n
        self.m = len(self.A_list)
        gram = [[inner(Ai, Aj) for Aj in self.A_list] for Ai in self.A_list]
        try:
            self.gram_inv = invert(gram) if self.m else []
        except SingularMatrixError as exc:
            raise RankDeficiencyError(
                f"constraint matrices are linearly dependent (Gram matrix singular at stage {exc.stage})",
                stage=exc.stage,
            ) from exc

    def apply_A(self, X) -> Vector:
        return [inner(A, X) for A in self.A_list]

    def apply_Astar(self, y) -> Matrix:
        if len(y) != self.m:
            raise ValueError(f"expected {self.m} multipliers, got {len(y)}")
        out = zeros(self.n)
        for yj, A in zip(y, self.A_list):
            if yj:
                out = axpy(yj, A, out)
        return out

    def project(self, Y) -> Matrix:
        if self.m == 0:
            return copy(Y)
        z = matvec(self.gram_inv, self.apply_A(Y))
        return sub(Y, self.apply_Astar(z))


def project_L(Y, A_list: Sequence[Matrix]) -> Matrix:
    return KernelProjector(A_list, len(Y)).project(Y)
