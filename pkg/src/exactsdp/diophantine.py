"""Componentwise continued-fraction rounding with explicit size guarantees."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from .rational import as_rational, bit_size_vector, ceil_fraction, ceil_log2


class DioApprox(NamedTuple):
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def convergents(alpha: Fraction) -> Iterator[tuple[int, int]]:
    """Yield the continued-fraction convergents ``(p_k, q_k)`` of ``alpha``."""
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    num, den = alpha.numerator, alpha.denominator
    while den:
        a, r = divmod(num, den)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q
        num, den = den, r


def _check_eps(eps) -> Fraction:
    eps = as_rational(eps)
    if not 0 < eps <= 1:
        raise ValueError(f"tolerance must lie in (0, 1], got {eps}")
    return eps


def euclid_guarantees(alpha: Fraction, eps: Fraction, p: int, q: int) -> bool:
    """``|alpha - p/q| < eps/q``, ``1 <= q <= 1/eps`` and ``|p| <= ceil|alpha| q``."""
    return (
        abs(alpha - Fraction(p, q)) * q < eps
        and 1 <= q
        and q * eps <= 1
        and abs(p) <= ceil_fraction(abs(alpha)) * q
    )


def approx_scalar(alpha, eps) -> DioApprox:
    """Last convergent of ``|alpha|`` with denominator at most ``1/eps``.

    The sign of ``alpha`` is restored afterwards.
    """
    alpha = as_rational(alpha)
    eps = _check_eps(eps)
    qmax = int(1 / eps)  # floor
    best = None
    for p, q in convergents(abs(alpha)):
        if q > qmax:
            break
        best = (p, q)
    p, q = best  # the first convergent always has q = 1
    if alpha < 0:
        p = -p
    if not euclid_guarantees(alpha, eps, p, q):
        raise AssertionError(f"convergent {p}/{q} misses the guarantees for {alpha} at {eps}")
    return DioApprox(p, q)


def vector_size_bound(n: int, sup_norm_ceil: int, eps) -> int:
    """``n * (6 + ceil(log2(n^2 * K / eps^2)))`` with ``K = max(1, sup_norm_ceil)``."""
    eps = as_rational(eps)
    K = max(1, sup_norm_ceil)
    return n * (6 + ceil_log2(Fraction(n * n * K) / (eps * eps)))


def approx_vector(alpha: Sequence, eps) -> list[Fraction]:
    """Round every component with tolerance ``eps/n``.

    The result is within Euclidean distance ``eps`` of ``alpha`` and its
    encoding length obeys :func:`vector_size_bound`.
    """
    eps = _check_eps(eps)
    alpha = [as_rational(a) for a in alpha]
    n = len(alpha)
    if n == 0:
        raise ValueError("approx_vector needs a nonempty vector")
    eps_i = eps / n
    out = [approx_scalar(a, eps_i).value for a in alpha]
    err_sq = sum(((a - b) ** 2 for a, b in zip(alpha, out)), Fraction(0))
    if not err_sq < eps * eps:
        raise AssertionError("componentwise rounding exceeded the Euclidean tolerance")
    sup = max(ceil_fraction(abs(a)) for a in alpha)
    if bit_size_vector(out) > vector_size_bound(n, sup, eps):
        raise AssertionError("rounded vector exceeds the encoding length bound")
    return out
