import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from exactsdp.rational import (
    bit_size_matrix,
    bit_size_scalar,
    bit_size_vector,
    ceil_log2,
    format_rational,
    isqrt_ceil,
    isqrt_floor,
    ln_bounds,
    parse_rational,
    sqrt_lower,
    sqrt_upper,
)

rationals = st.fractions(max_denominator=10**6).filter(lambda x: abs(x) < 10**8)
nonneg = st.fractions(min_value=0, max_denominator=10**6).filter(lambda x: x < 10**8)
relerrs = st.sampled_from([F(1), F(1, 2), F(1, 4), F(1, 10), F(1, 1000)])


def float_size(x):
    # independent evaluation of 1 + ceil(log2|p| + 1) + ceil(log2 q + 1)
    p = abs(x.numerator) or 1
    return 1 + math.ceil(math.log2(p) + 1) + math.ceil(math.log2(x.denominator) + 1)


@pytest.mark.parametrize(
    "x, expected",
    [(F(1), 3), (F(0), 3), (F(31, 100), 15)],
)
def test_bit_size_scalar_examples(x, expected):
    assert bit_size_scalar(x) == expected


def test_bit_size_vector_and_matrix_examples():
    assert bit_size_vector([F(1)]) == 4
    assert bit_size_vector([F(0), F(0)]) == 8
    # 1/2 -> 1 + 1 + 2, 1/3 -> 1 + 1 + 3
    assert bit_size_vector([F(1, 2), F(1, 3)]) == 11
    assert bit_size_matrix([[F(0)]]) == 4
    assert bit_size_matrix([[F(1), F(0)], [F(0), F(1)]]) == 16
    assert bit_size_matrix([[F(1, 2), F(1, 3)]]) == 11


@given(st.fractions(max_denominator=2**40).filter(lambda x: abs(x) < 2**40))
def test_bit_size_matches_float_formula(x):
    assert bit_size_scalar(x) == float_size(x)


@given(rationals)
def test_bit_size_sign_invariant(x):
    assert bit_size_scalar(x) == bit_size_scalar(-x) >= 3


@pytest.mark.parametrize("n, root", [(0, 0), (16, 4), (17, 4), (10**40 + 1, 10**20)])
def test_isqrt_floor(n, root):
    assert isqrt_floor(n) == root


@given(st.integers(min_value=0, max_value=10**30))
def test_isqrt_ceil(n):
    c = isqrt_ceil(n)
    assert c * c >= n
    assert c == 0 or (c - 1) ** 2 < n


def test_sqrt_examples():
    assert sqrt_upper(4, F(1, 4)) == 2
    assert sqrt_lower(4, F(1, 4)) == 2
    assert sqrt_upper(0, F(1, 4)) == 0
    assert sqrt_lower(0, F(1, 4)) == 0
    u = sqrt_upper(2, F(1, 4))
    assert u * u >= 2 and u <= F(5, 4) * F(14143, 10000)
    low = sqrt_lower(2, F(1, 4))
    assert low * low <= 2 and low >= F(3, 4) * F(14142, 10000)


@given(nonneg, relerrs)
def test_sqrt_bounds_bracket(s, e):
    u = sqrt_upper(s, e)
    low = sqrt_lower(s, e)
    assert low * low <= s <= u * u
    assert u * u <= s * (1 + e) ** 2
    assert low * low >= s * (1 - e) ** 2


def test_sqrt_rejects_bad_arguments():
    with pytest.raises(ValueError):
        sqrt_upper(-1)
    with pytest.raises(ValueError):
        sqrt_lower(2, 0)
    with pytest.raises(ValueError):
        sqrt_upper(2, 2)


@given(rationals, rationals)
def test_exact_arithmetic_roundtrip(a, b):
    assert (a + b) - b == a
    for value in (a + b, a - b, a * b):
        assert value.denominator >= 1
        assert math.gcd(value.numerator, value.denominator) == 1


@given(rationals)
def test_format_parse_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


@pytest.mark.parametrize("bad", ["0.5", "1e3", "1/0", "", "--1", "1/-2", " / "])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_omits_unit_denominator():
    assert format_rational(F(-3)) == "-3"
    assert format_rational(F(-3, 4)) == "-3/4"


@given(st.fractions(min_value=F(1, 10**9), max_value=10**12, max_denominator=10**9))
def test_ceil_log2(x):
    e = ceil_log2(x)
    assert F(2) ** e >= x > F(2) ** (e - 1)


@given(st.fractions(min_value=F(1, 10**6), max_value=10**9, max_denominator=10**6))
def test_ln_bounds_bracket_float_log(x):
    lo, hi = ln_bounds(x)
    ref = math.log(x.numerator) - math.log(x.denominator)
    assert lo <= hi
    assert hi - lo < F(1, 10**15)
    assert float(lo) - 1e-12 <= ref <= float(hi) + 1e-12
