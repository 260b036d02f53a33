"""Exact rational scalars and the few integer-arithmetic helpers built on them.

Every quantity in this package is a rational number in lowest terms with a
positive denominator.  Distances are always carried as squared distances so
that no square root is ever taken; the helpers below cover the only root-like
operations we need (exact roots of perfect squares, floor/ceil, and one-sided
rational approximations of square roots for sampling bounds).
"""

from __future__ import annotations

import math
import re

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rat

__all__ = [
    "Rat",
    "rat",
    "parse_rational",
    "format_rational",
    "floor_rat",
    "ceil_rat",
    "isqrt_rat",
    "sqrt_lower_bound",
]

_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def rat(value, den=None) -> Rat:
    """Coerce ints, rational strings, or rational objects to Rat.

    Floats are refused: they would silently smuggle binary rounding into a
    codebase whose whole point is exactness.
    """
    if den is not None:
        return Rat(value, den)
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass an int, string, or rational")
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, int):
        return Rat(value)
    # Fraction, mpq, or anything exposing exact numerator/denominator.
    return Rat(value.numerator, value.denominator)


def parse_rational(text: str) -> Rat:
    """Parse 'p' or 'p/q' with integer p, q.  Anything else is rejected."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    return Rat(text)


def format_rational(x) -> str:
    """Inverse of parse_rational: 'p' for integers, 'p/q' otherwise."""
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def floor_rat(x) -> int:
    return int(x.numerator // x.denominator)


def ceil_rat(x) -> int:
    return int(-((-x.numerator) // x.denominator))


def isqrt_rat(x):
    """Exact square root of a rational, or None when it is irrational.

    A nonnegative rational in lowest terms is a perfect square iff both its
    numerator and denominator are perfect squares of integers.
    """
    x = rat(x)
    if x < 0:
        return None
    num, den = int(x.numerator), int(x.denominator)
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Rat(rn, rd)
    return None


def sqrt_lower_bound(x, scale_bits: int = 32) -> Rat:
    """A rational r with r <= sqrt(x), tight to about 2**-scale_bits.

    Used only to size sampling boxes; correctness never depends on tightness,
    only on the one-sided bound.
    """
    x = rat(x)
    if x < 0:
        raise ValueError("negative radicand")
    shift = 1 << scale_bits
    # floor(sqrt(num * shift^2 / den)) / shift <= sqrt(x)
    n = int(x.numerator) * shift * shift
    r = math.isqrt(n // int(x.denominator))
    return Rat(r, shift)
