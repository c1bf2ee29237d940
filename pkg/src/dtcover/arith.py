"""
Exact arithmetic helpers.

All invariant values are ``fractions.Fraction``; nothing in the engine ever
touches a float. Rationals travel through files and CLI output as ``"p/q"``
strings (integers without a denominator).
"""

import math
import re
from fractions import Fraction
from typing import Iterable, List, Tuple, Union

from sympy import divisors as _sympy_divisors
from sympy import isprime as _sympy_isprime

from .errors import ConfigurationError, GraphDomainError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")
_NATURAL_RE = re.compile(r"(\d+)")


def parse_rational(text: Union[str, int]) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (or a plain int) into a reduced Fraction."""
    if isinstance(text, bool):
        raise ConfigurationError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ConfigurationError(
            f"rationals must be 'p/q' strings, got {type(text).__name__}: {text!r}"
        )
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ConfigurationError(f"not a rational: {text!r}")
    numerator, denominator = match.group(1), match.group(2)
    if denominator is not None and int(denominator) == 0:
        raise ConfigurationError(f"zero denominator: {text!r}")
    return Fraction(int(numerator), int(denominator or 1))


def format_rational(value: Fraction) -> str:
    """Canonical ``p/q`` text; round-trips through ``parse_rational``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def gcd_all(values: Iterable[int]) -> int:
    """gcd of the absolute values; gcd of nothing (or all zeros) is 0."""
    result = 0
    for value in values:
        result = math.gcd(result, abs(value))
    return result


def divisors(value: int) -> List[int]:
    """Positive divisors of ``value`` in increasing order."""
    if value <= 0:
        raise GraphDomainError(f"divisors of non-positive integer {value}")
    return [int(k) for k in _sympy_divisors(value)]


def is_prime(value: int) -> bool:
    return value > 1 and bool(_sympy_isprime(value))


def smallest_odd_above(value: int) -> int:
    """Smallest odd integer strictly greater than ``value``."""
    candidate = value + 1
    return candidate if candidate % 2 == 1 else candidate + 1


def sign(exponent: int) -> int:
    """(-1) ** exponent for any integer exponent."""
    return -1 if exponent % 2 else 1


def natural_key(label: str) -> Tuple[Tuple[int, int, str], ...]:
    """Sort key ordering ``x.2`` before ``x.10``."""
    parts = _NATURAL_RE.split(label)
    return tuple(
        (0, int(part), "") if part.isdigit() else (1, 0, part) for part in parts if part
    )
