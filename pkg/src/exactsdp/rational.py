"""Exact rational scalars, encoding lengths and rational square-root bounds.

All arithmetic in the package is carried out on :class:`fractions.Fraction`,
which keeps every value in lowest terms with a positive denominator.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int]

_RATIONAL_RE = re.compile(r"^(-?)(\d+)(?:/(\d+))?$")

# ln 2 = 0.69314718055994530941723...
_LN2_LO = Fraction(6931471805599453094, 10**19)
_LN2_HI = Fraction(6931471805599453095, 10**19)


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"-p/q"`` or ``"p"``. Decimals are rejected."""
    m = _RATIONAL_RE.match(text.strip()) if isinstance(text, str) else None
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    sign, num, den = m.groups()
    den = int(den) if den is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    value = Fraction(int(num), den)
    return -value if sign else value


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _ceil_log2_int(k: int) -> int:
    # smallest e >= 0 with 2**e >= k, for k >= 1
    return (k - 1).bit_length()


def bit_size_scalar(x: RationalLike) -> int:
    """Encoding length ``1 + ceil(log2|p| + 1) + ceil(log2 q + 1)``.

    Zero is measured as if ``|p| = 1``, so ``bit_size_scalar(0) == 3``.
    """
    x = as_rational(x)
    p = abs(x.numerator) or 1
    return 1 + (_ceil_log2_int(p) + 1) + (_ceil_log2_int(x.denominator) + 1)


def bit_size_vector(v: Iterable[RationalLike]) -> int:
    v = list(v)
    return sum(bit_size_scalar(x) for x in v) + len(v)


def bit_size_matrix(M: Sequence[Sequence[RationalLike]]) -> int:
    total = 0
    count = 0
    for row in M:
        for x in row:
            total += bit_size_scalar(x)
            count += 1
    return total + count


def isqrt_floor(n: int) -> int:
    if n < 0:
        raise ValueError("isqrt_floor of a negative integer")
    return math.isqrt(n)


def isqrt_ceil(n: int) -> int:
    """Exact ``ceil(sqrt(n))`` for a natural number ``n``."""
    if n < 0:
        raise ValueError("isqrt_ceil of a negative integer")
    return 0 if n == 0 else math.isqrt(n - 1) + 1


def _exact_sqrt(s: Fraction) -> Fraction | None:
    rp = math.isqrt(s.numerator)
    rq = math.isqrt(s.denominator)
    if rp * rp == s.numerator and rq * rq == s.denominator:
        return Fraction(rp, rq)
    return None


def _check_sqrt_args(s, relerr):
    s = as_rational(s)
    relerr = as_rational(relerr)
    if s < 0:
        raise ValueError(f"square root bound of negative value {s}")
    if not 0 < relerr <= 1:
        raise ValueError(f"relative error must lie in (0, 1], got {relerr}")
    return s, relerr


def _start_scale(s: Fraction, relerr: Fraction) -> int:
    # K >= 1/(relerr * sqrt(s)) roughly; refined by the loops below
    bits = (s.denominator.bit_length() - s.numerator.bit_length()) // 2 + 2
    bits += relerr.denominator.bit_length() - relerr.numerator.bit_length() + 1
    return max(bits, 1)


def sqrt_upper(s: RationalLike, relerr: RationalLike = Fraction(1, 4)) -> Fraction:
    """Rational ``u`` with ``sqrt(s) <= u <= sqrt(s) * (1 + relerr)``."""
    s, relerr = _check_sqrt_args(s, relerr)
    if s == 0:
        return Fraction(0)
    exact = _exact_sqrt(s)
    if exact is not None:
        return exact
    limit = s * (1 + relerr) ** 2
    k = _start_scale(s, relerr)
    while True:
        K = 1 << k
        scaled = s * K * K
        c = -((-scaled.numerator) // scaled.denominator)
        u = Fraction(isqrt_ceil(c), K)
        if u * u <= limit:
            return u
        k += 1


def sqrt_lower(s: RationalLike, relerr: RationalLike = Fraction(1, 4)) -> Fraction:
    """Rational ``l`` with ``sqrt(s) * (1 - relerr) <= l <= sqrt(s)``."""
    s, relerr = _check_sqrt_args(s, relerr)
    if s == 0:
        return Fraction(0)
    exact = _exact_sqrt(s)
    if exact is not None:
        return exact
    limit = s * (1 - relerr) ** 2
    k = _start_scale(s, relerr)
    while True:
        K = 1 << k
        scaled = s * K * K
        low = Fraction(math.isqrt(scaled.numerator // scaled.denominator), K)
        if low * low >= limit:
            return low
        k += 1


def ceil_log2(x: RationalLike) -> int:
    """Smallest integer ``e`` with ``2**e >= x`` for rational ``x > 0``."""
    x = as_rational(x)
    if x <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    e = x.numerator.bit_length() - x.denominator.bit_length()
    while Fraction(2) ** e < x:
        e += 1
    while Fraction(2) ** (e - 1) >= x:
        e -= 1
    return e


def floor_log2(x: RationalLike) -> int:
    x = as_rational(x)
    e = ceil_log2(x)
    return e if Fraction(2) ** e == x else e - 1


def _ln_mantissa_bounds(y: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    # y in [1, 2): ln y = 2 * sum z**(2j+1)/(2j+1), z = (y-1)/(y+1) < 1/3
    z = (y - 1) / (y + 1)
    z2 = z * z
    power = z
    partial = Fraction(0)
    for j in range(terms):
        partial += power / (2 * j + 1)
        power *= z2
    # remaining terms are bounded by a geometric series in z**2
    tail = power / ((2 * terms + 1) * (1 - z2))
    return 2 * partial, 2 * (partial + tail)


def ln_bounds(x: RationalLike, terms: int = 24) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo <= ln(x) <= hi`` for ``x > 0``."""
    x = as_rational(x)
    if x <= 0:
        raise ValueError("logarithm of a nonpositive number")
    if x < 1:
        lo, hi = ln_bounds(1 / x, terms)
        return -hi, -lo
    e = floor_log2(x)
    y = x / Fraction(2) ** e
    lo, hi = _ln_mantissa_bounds(y, terms)
    return e * _LN2_LO + lo, e * _LN2_HI + hi


def ln_upper(x: RationalLike) -> Fraction:
    return ln_bounds(x)[1]


def ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)
