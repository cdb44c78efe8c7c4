"""Exact scalars used throughout the model.

Rationals come from sympy's ``QQ`` domain and Gaussian rationals from
``QQ_I``. Exact fractions cross every boundary (config, reports, literals)
as ``"p/q"`` strings.
"""

from __future__ import annotations

import logging
import re
from fractions import Fraction
from typing import Any

from sympy.polys.domains import QQ, QQ_I

LOGGER = logging.getLogger(__name__)

Rational = Any
Gaussian = Any

ZERO = QQ(0)
ONE = QQ(1)
IMAG_UNIT = QQ_I(0, 1)

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


class RationalParseError(ValueError):
    """Raised when a ``p/q`` literal cannot be parsed."""


def to_rational(value: Any) -> Rational:
    """Coerce ints, fractions, strings and ``QQ`` elements to ``QQ``."""

    if isinstance(value, bool):
        raise RationalParseError(f"Booleans are not rationals: {value!r}")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    if QQ.of_type(value):
        return value
    raise RationalParseError(f"Cannot interpret {value!r} as a rational")


def parse_rational(text: str) -> Rational:
    """Parse ``"p"`` or ``"p/q"`` into an exact rational."""

    match = _RATIONAL_PATTERN.match(text)
    if match is None:
        raise RationalParseError(f"Malformed rational literal {text!r}")
    numerator, denominator = match.group(1), match.group(2)
    try:
        value = Fraction(int(numerator), int(denominator or 1))
    except ZeroDivisionError as exc:
        raise RationalParseError(
            f"Zero denominator in rational literal {text!r}"
        ) from exc
    return QQ(value.numerator, value.denominator)


def render_rational(value: Rational) -> str:
    """Render a rational as ``"p"`` or ``"p/q"``."""

    value = to_rational(value)
    numerator = int(value.numerator)
    denominator = int(value.denominator)
    if denominator == 1:
        return str(numerator)
    return f"{numerator}/{denominator}"


def gaussian(real: Any, imag: Any = 0) -> Gaussian:
    return QQ_I(to_rational(real), to_rational(imag))


def conjugate(value: Gaussian) -> Gaussian:
    return QQ_I(value.x, -value.y)


def is_zero(value: Gaussian) -> bool:
    return bool(value.x == 0 and value.y == 0)


def render_gaussian(value: Gaussian) -> str:
    """Render ``a + b i`` as ``"(a+bi)"`` with exact parts."""

    real = render_rational(value.x)
    imag = render_rational(value.y)
    sign = "" if imag.startswith("-") else "+"
    return f"({real}{sign}{imag}i)"


__all__ = [
    "Gaussian",
    "IMAG_UNIT",
    "ONE",
    "Rational",
    "RationalParseError",
    "ZERO",
    "conjugate",
    "gaussian",
    "is_zero",
    "parse_rational",
    "render_gaussian",
    "render_rational",
    "to_rational",
]
