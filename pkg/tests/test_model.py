import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from exactsdp import linalg as la
from exactsdp.errors import RepresentationError, ValidationError
from exactsdp.instances import lovasz_theta, min_eigenvalue, cycle_edges
from exactsdp.model import SdpProblem, normalize_objective

from conftest import rand_symmetric, random_problem

I2 = la.identity(2)


def trace_problem(C=((1, 0), (0, 2)), X0=None):
    return SdpProblem.build(
        C=C, A_list=[I2], b=[1], X0=X0 or la.scale(F(1, 2), I2), r=F(1, 2), R=2, epsilon=F(1, 100)
    )


def test_apply_A_examples():
    p = trace_problem()
    assert p.apply_A(p.X0) == list(p.b)
    assert p.apply_A(la.diag([1, -1])) == [0]
    assert p.apply_A(la.diag([F(1, 3), F(2, 3)])) == [1]


def test_apply_Astar_examples():
    p = trace_problem()
    assert la.is_zero(p.apply_Astar([0]))
    assert p.apply_Astar([2]) == la.scale(2, I2)


@given(st.integers(1, 4), st.integers(0, 2**32))
@settings(max_examples=30, deadline=None)
def test_adjointness(n, seed):
    rng = random.Random(seed)
    p = random_problem(rng, n, rng.randint(0, n * (n + 1) // 2 - 1))
    y = [F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(p.m)]
    X = rand_symmetric(rng, n)
    assert la.inner(p.apply_Astar(y), X) == sum(yj * aj for yj, aj in zip(y, p.apply_A(X)))


def test_normalize_objective_examples():
    p = trace_problem(C=la.diag([1, -1]))
    q, offset = normalize_objective(p)
    assert q.C == p.C and offset == 0
    q, offset = normalize_objective(trace_problem(C=I2))
    assert la.is_zero(q.C) and offset == la.inner(I2, q.X0) == 1
    free = SdpProblem.build(C=I2, A_list=[], b=[], X0=I2, r=F(1, 2), R=1, epsilon=F(1, 10))
    q, offset = normalize_objective(free)
    assert q.C == I2 and offset == 0


@given(st.integers(1, 4), st.integers(0, 2**32))
@settings(max_examples=30, deadline=None)
def test_objective_invariance(n, seed):
    rng = random.Random(seed)
    p = random_problem(rng, n, rng.randint(0, n * (n + 1) // 2 - 1))
    q, offset = normalize_objective(p)
    coords = [F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(p.d)]
    X = p.coords_to_matrix(coords)
    assert p.apply_A(X) == list(p.b)
    assert la.inner(p.C, X) == offset + la.inner(q.C, X)


def test_coordinates_examples():
    p = trace_problem()
    assert p.matrix_to_coords(p.X0) == [0] * p.d
    X = la.add(p.X0, p.basis.elements[0])
    assert p.matrix_to_coords(X) == [1] + [0] * (p.d - 1)
    with pytest.raises(RepresentationError):
        p.matrix_to_coords(I2)


@given(st.integers(1, 4), st.integers(0, 2**32))
@settings(max_examples=30, deadline=None)
def test_coordinate_roundtrip(n, seed):
    rng = random.Random(seed)
    p = random_problem(rng, n, rng.randint(0, n * (n + 1) // 2 - 1))
    dX = p.project(rand_symmetric(rng, n))
    X = la.add(p.X0, dX)
    coords = p.matrix_to_coords(X)
    assert p.coords_to_matrix(coords) == X
    assert p.matrix_to_coords(p.coords_to_matrix(coords)) == coords


def test_coordinate_bound_inside_R_ball():
    # trace-one PSD matrices lie within R = 1 of I/3, so |x_i| <= 2R
    p = min_eigenvalue(la.diag([1, 2, 3]))
    rng = random.Random(3)
    for _ in range(50):
        v = [F(rng.randint(-9, 9)) for _ in range(3)]
        X = [[vi * vj for vj in v] for vi in v]
        t = la.trace(X)
        if t == 0:
            continue
        X = la.scale(1 / t, X)
        assert la.frobenius_sq(la.sub(X, p.X0)) <= p.R**2
        assert all(abs(x) <= 2 * p.R for x in p.matrix_to_coords(X))


@pytest.mark.parametrize(
    "kwargs, message",
    [
        (dict(b=[2]), "<A_1,X0> != b_1"),
        (dict(X0=la.diag([F(3, 2), F(-1, 2)])), "X0 not positive definite: LDL pivot 2 = -1/2"),
        (dict(r=F(3), R=F(2)), "need r <= R"),
        (dict(r=F(0)), "r must be positive"),
        (dict(epsilon=F(0)), "epsilon must be positive"),
        (dict(A_list=[I2, la.scale(2, I2)], b=[1, 2]), "A is not surjective"),
        (dict(C=la.to_matrix([[1, 2], [0, 1]])), "C is not symmetric"),
    ],
)
def test_validation_failures(kwargs, message):
    data = dict(C=la.diag([1, 2]), A_list=[I2], b=[1], X0=la.scale(F(1, 2), I2), r=F(1, 2), R=F(2), epsilon=F(1, 100))
    data.update(kwargs)
    with pytest.raises(ValidationError, match=message.replace("(", r"\(")):
        SdpProblem.build(**data)


def test_lovasz_instance_shape():
    p = lovasz_theta(5, cycle_edges(5))
    assert (p.n, p.m, p.d) == (5, 6, 9)
    assert p.validated
