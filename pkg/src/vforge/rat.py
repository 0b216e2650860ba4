"""Exact rational scalars.

``fractions.Fraction`` already keeps numerator/denominator in lowest terms
with a positive denominator, so it is used directly as the scalar type.
This module only adds the strict string boundary ("p/q", no decimals).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from .errors import RationalParseError

Rat = Fraction
RatLike = Union[Fraction, int, str]

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rat(text: RatLike) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise RationalParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise RationalParseError(f"not a rational: {text!r}")
    m = _RAT_RE.match(text)
    if m is None:
        raise RationalParseError(f"expected 'p/q' or integer, got {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise RationalParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def fmt_rat(value: Fraction) -> str:
    return str(Fraction(value))


def clamp01(value: Fraction) -> Fraction:
    if value < 0:
        return ZERO
    if value > 1:
        return ONE
    return value
