import random
from fractions import Fraction as F

import pytest


def rand_rational(rng, num=9, den=5):
    return F(rng.randint(-num, num), rng.randint(1, den))


def rand_matrix(rng, rows, cols=None, **kw):
    cols = rows if cols is None else cols
    return [[rand_rational(rng, **kw) for _ in range(cols)] for _ in range(rows)]


def rand_symmetric(rng, n, **kw):
    M = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = rand_rational(rng, **kw)
    return M


def rand_independent_constraints(rng, n, m):
    """m random symmetric matrices that are linearly independent (checked)."""
    from exactsdp.errors import RankDeficiencyError
    from exactsdp.linalg import KernelProjector

    while True:
        A = [rand_symmetric(rng, n, num=3, den=2) for _ in range(m)]
        try:
            KernelProjector(A, n)
        except RankDeficiencyError:
            continue
        return A


def random_problem(rng, n, m, C=None):
    """Random valid instance around X0 = I + (small symmetric), b = A(X0)."""
    from exactsdp import linalg as la
    from exactsdp.model import SdpProblem

    A = rand_independent_constraints(rng, n, m)
    X0 = la.add(la.identity(n), la.scale(F(1, 10 * n), rand_symmetric(rng, n, num=1, den=1)))
    b = [la.inner(Aj, X0) for Aj in A]
    C = rand_symmetric(rng, n) if C is None else C
    return SdpProblem.build(C, A, b, X0, F(1, 100), 10, F(1, 10))


@pytest.fixture
def rng():
    return random.Random(20261017)


_criteria = []


def record_criterion(number, passed, detail):
    _criteria.append((number, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_criteria, key=lambda c: c[0]):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
