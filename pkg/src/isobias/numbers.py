"""Exact-rational helpers for table-style reporting."""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction


def round_half_up(value: float | Fraction | int, digits: int = 2) -> float:
    if isinstance(value, Fraction):
        dec = Decimal(value.numerator) / Decimal(value.denominator)
    else:
        dec = Decimal(repr(float(value)))
    q = Decimal(1).scaleb(-digits)
    return float(dec.quantize(q, rounding=ROUND_HALF_UP))


def percent(num: int, den: int) -> Fraction:
    """``num/den`` as an exact percentage; zero when ``den`` is zero."""
    return Fraction(100 * num, den) if den else Fraction(0)


def frac_json(f: Fraction) -> list[int]:
    return [f.numerator, f.denominator]
