"""Exact conversions between decimal text and rationals.

Every numeric value the engine touches (leaf scores, thresholds, continuous
feature values) is a `fractions.Fraction` parsed exactly from its decimal
representation.  Binary floats never enter the pipeline, so score
comparisons and tie detection are exact.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from fractions import Fraction


def parse_decimal(text: str | int | float | Fraction) -> Fraction:
    """Parse decimal text (plain or scientific notation) into an exact rational.

    Accepts int and Fraction unchanged.  Floats are rejected: by the time a
    value is a float its decimal identity is already lost.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError("boolean is not a numeric literal")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError("refusing to convert a binary float; pass the decimal text")
    try:
        dec = Decimal(text.strip())
    except (InvalidOperation, AttributeError) as exc:
        raise ValueError(f"not a decimal literal: {text!r}") from exc
    if not dec.is_finite():
        raise ValueError(f"not a finite decimal: {text!r}")
    return Fraction(dec)


def to_decimal_str(value: Fraction) -> str:
    """Render a rational as exact text.

    Terminating decimals (denominator 2^a * 5^b) come out in plain decimal
    notation; anything else as "p/q".
    """
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    # scale numerator so the denominator becomes a power of ten
    shift = max(twos, fives)
    scaled = value.numerator * (2 ** (shift - twos)) * (5 ** (shift - fives))
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(shift + 1, "0")
    whole, frac = digits[:-shift], digits[-shift:]
    return f"{sign}{whole}.{frac}"


def smt_real(value: Fraction) -> str:
    """Render a rational as an SMT-LIB2 Real term."""
    if value < 0:
        return f"(- {smt_real(-value)})"
    if value.denominator == 1:
        return f"{value.numerator}.0"
    text = to_decimal_str(value)
    if "/" in text:
        return f"(/ {value.numerator} {value.denominator})"
    return text
