"""Exact p-adic valuations, magnitudes and basis-change tables.

Every quantity in this package is an exact rational (``fractions.Fraction``)
or an integer; there is no floating point anywhere.  Norm values p^q are
represented by their exponent q (see :class:`LogMag`), so every norm
comparison reduces to an exact comparison of rationals.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Tuple, Union

Rational = Union[int, Fraction]
MultiIndex = Tuple[int, ...]

#: Valuation of zero.
INFINITY = math.inf

STIRLING_CAP = 24


def _int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("zero has no finite valuation")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: Rational, p: int):
    """p-adic valuation of an exact rational, +inf for zero."""
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return Fraction(_int_valuation(x.numerator, p) - _int_valuation(x.denominator, p))


def digit_sum(n: int, p: int) -> int:
    """Sum of the base-p digits of n >= 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    s = 0
    while n:
        n, r = divmod(n, p)
        s += r
    return s


def factorial_valuation(n: int, p: int) -> Fraction:
    """v_p(n!) computed as (n - digit_sum(n)) / (p - 1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return Fraction(n - digit_sum(n, p), p - 1)


def multi_factorial_valuation(alpha: MultiIndex, p: int) -> Fraction:
    """v_p(alpha!) for a multi-index, alpha! = alpha_1! ... alpha_d!."""
    return sum((factorial_valuation(a, p) for a in alpha), Fraction(0))


@lru_cache(maxsize=None)
def stirling_second(beta: int, alpha: int) -> int:
    """Stirling number of the second kind: x^beta = sum_a s(beta,a) x_falling^a.

    Indices outside 0 <= alpha <= beta are rejected.
    """
    if not 0 <= alpha <= beta:
        raise ValueError(f"stirling_second out of range: ({beta}, {alpha})")
    if beta == 0:
        return 1
    if alpha == 0:
        return 0
    if alpha == beta:
        return 1
    # s(b, a) = a*s(b-1, a) + s(b-1, a-1)
    prev = stirling_second(beta - 1, alpha) if alpha <= beta - 1 else 0
    return alpha * prev + stirling_second(beta - 1, alpha - 1)


@lru_cache(maxsize=None)
def falling_coeff(alpha: int, beta: int) -> int:
    """Coefficient of x^beta in x(x-1)...(x-alpha+1); leading one is 1.

    Indices outside 0 <= beta <= alpha are rejected.
    """
    if not 0 <= beta <= alpha:
        raise ValueError(f"falling_coeff out of range: ({alpha}, {beta})")
    if alpha == 0:
        return 1
    if beta == 0:
        return 0
    # x_falling^a = x_falling^(a-1) * (x - (a-1))
    upper = falling_coeff(alpha - 1, beta) if beta <= alpha - 1 else 0
    return falling_coeff(alpha - 1, beta - 1) - (alpha - 1) * upper


def binom_value(x: Rational, k: int) -> Fraction:
    """binom(x, k) = x(x-1)...(x-k+1)/k! for rational x."""
    if k < 0:
        raise ValueError("k must be non-negative")
    x = Fraction(x)
    num = Fraction(1)
    for j in range(k):
        num *= x - j
    return num / math.factorial(k)


def multi_binom_value(x: Tuple[Rational, ...], alpha: MultiIndex) -> Fraction:
    """binom(x, alpha) = prod_i binom(x_i, alpha_i)."""
    if len(x) != len(alpha):
        raise ValueError("length mismatch")
    out = Fraction(1)
    for xi, ai in zip(x, alpha):
        out *= binom_value(xi, ai)
        if out == 0:
            break
    return out


def total_degree(alpha: MultiIndex) -> int:
    return sum(alpha)


def dominates(beta: MultiIndex, alpha: MultiIndex) -> bool:
    """Componentwise beta >= alpha."""
    return all(b >= a for b, a in zip(beta, alpha))


def grlex_key(alpha: MultiIndex):
    """Graded lexicographic sort key, used for deterministic iteration."""
    return (sum(alpha), alpha)


@total_ordering
class LogMag:
    """A p-power magnitude p^exponent, with a bottom element for zero.

    Bottom is absorbing under multiplication and minimal under comparison.
    For nonzero x the exponent is -v_p(x), so the magnitude equals |x|_p.
    """

    __slots__ = ("exponent",)

    def __init__(self, exponent: Rational | None):
        if exponent is None:
            self.exponent = None
        else:
            self.exponent = Fraction(exponent)

    @classmethod
    def bottom(cls) -> "LogMag":
        return cls(None)

    @classmethod
    def of(cls, x: Rational, p: int) -> "LogMag":
        """Magnitude |x|_p of an exact rational."""
        if x == 0:
            return cls.bottom()
        return cls(-valuation(x, p))

    @property
    def is_bottom(self) -> bool:
        return self.exponent is None

    def __mul__(self, other: "LogMag") -> "LogMag":
        if self.is_bottom or other.is_bottom:
            return LogMag.bottom()
        return LogMag(self.exponent + other.exponent)

    def __eq__(self, other):
        if not isinstance(other, LogMag):
            return NotImplemented
        return self.exponent == other.exponent

    def __lt__(self, other: "LogMag") -> bool:
        if self.is_bottom:
            return not other.is_bottom
        if other.is_bottom:
            return False
        return self.exponent < other.exponent

    def __hash__(self):
        return hash(("LogMag", self.exponent))

    def __repr__(self):
        if self.is_bottom:
            return "LogMag(zero)"
        return f"LogMag(p^{self.exponent})"


def leq_with_integer_factor(lhs: LogMag, rhs: LogMag, factor: int, p: int) -> bool:
    """Decide p^lhs <= factor * p^rhs exactly, for a positive integer factor.

    Reduces to an integer power comparison p^a <= factor^b with a/b the
    normalized exponent difference.
    """
    if factor < 1:
        raise ValueError("factor must be a positive integer")
    if lhs.is_bottom:
        return True
    if rhs.is_bottom:
        return False
    q = lhs.exponent - rhs.exponent
    if q <= 0:
        return True
    return p ** q.numerator <= factor ** q.denominator


def format_fraction(x) -> str:
    """Rational (or +inf) as a "num/den" report string."""
    if x == INFINITY:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)
