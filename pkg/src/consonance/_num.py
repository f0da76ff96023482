"""Scalar helpers shared across modules.

Values flowing through the package are either exact rationals
(``fractions.Fraction``, produced by label pipelines) or floats (produced by
numeric pipelines).  Python compares the two exactly, so mixed arithmetic is
safe; these helpers centralize formatting and the exact/float dispatch.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

Scalar = int | float | Fraction


def is_rational(value: Scalar) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def all_rational(values) -> bool:
    return all(is_rational(v) for v in values)


def zero_like(values) -> Scalar:
    """Additive identity matching the flavor of ``values``."""
    return Fraction(0) if all_rational(values) else 0.0


def fmt_scalar(value: Scalar):
    """JSON form: rationals as "num/den" strings, floats as floats."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar value")
    if isinstance(value, int):
        return f"{value}/1"
    return float(value)


def parse_scalar(text) -> Scalar:
    """Inverse of :func:`fmt_scalar`; accepts "num/den" strings and numbers."""
    if isinstance(text, str):
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den) if den else 1)
    return float(text)


def common_integers(values, cap: int = 1 << 40) -> tuple[list[int], int] | None:
    """Rescale rationals to a common denominator, as exact integers.

    Returns ``(numerators, denominator)`` with ``values[i] == num[i]/den``,
    or None when any value is a float or the common denominator exceeds
    ``cap`` (callers then fall back to float arithmetic).
    """
    if not all_rational(values):
        return None
    fracs = [Fraction(v) for v in values]
    den = 1
    for f in fracs:
        den = lcm(den, f.denominator)
        if den > cap:
            return None
    return [int(f * den) for f in fracs], den
