"""Scalar backends: exact rationals and arbitrary-precision floats.

Exact arithmetic uses gmpy2.mpq when available (an order of magnitude
faster on large numerators) and falls back to fractions.Fraction.  Both
expose the numbers.Rational protocol, so everything downstream is written
against plain arithmetic operators.

Floats are mpmath mpf values; callers control precision through
``mp.workdps`` blocks.  A quantity "computed at precision p" means p
correct decimal digits; internal work always carries guard digits.
"""

from __future__ import annotations

import numbers

from mpmath import mp

try:
    from gmpy2 import mpq as rational
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    from fractions import Fraction as rational

#: extra decimal digits carried by internal computations
GUARD_DIGITS = 15

RAT_ZERO = rational(0)
RAT_ONE = rational(1)


def is_rational(x) -> bool:
    return isinstance(x, numbers.Rational)


def parse_rational(text: str):
    """Parse 'p' or 'p/q' into an exact rational."""
    t = text.strip()
    if "/" in t:
        p, q = t.split("/", 1)
        return rational(int(p.strip()), int(q.strip()))
    return rational(int(t))


def rational_str(x) -> str:
    """Canonical 'p/q' (or 'p') form, identical for both backends."""
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def to_mpf(x):
    """Convert a rational or float scalar to mpf at the current precision."""
    if is_rational(x):
        return mp.mpf(int(x.numerator)) / int(x.denominator)
    return mp.mpf(x)


def quantize(x, precision: int):
    """Round x to `precision` working decimal digits."""
    with mp.workdps(precision):
        return +mp.mpf(x)


def mpf_to_decimal(x, precision: int) -> str:
    """Decimal string carrying enough digits to reproduce x exactly.

    Round-tripping contract: parsing with decimal_to_mpf at the same
    `precision` recovers the bit pattern of a value that was quantized to
    that precision.
    """
    with mp.workdps(precision + 8):
        return mp.nstr(mp.mpf(x), precision + 8)


def decimal_to_mpf(s: str, precision: int):
    with mp.workdps(precision):
        return mp.mpf(s)
