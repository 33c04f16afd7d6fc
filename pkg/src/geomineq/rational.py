"""Exact rational arithmetic carrier and helpers.

Every exact-path computation in this package runs on arbitrary precision
rationals.  gmpy2's ``mpq`` is used when available (roughly 5-10x faster
than ``fractions.Fraction`` on the dense eliminations inside the hull
engine); the stdlib Fraction is a drop-in fallback.  The two types hash
and compare identically, so cached geometry is portable between them.

Floats are deliberately rejected by :func:`rat`: a float sneaking into an
exact pipeline is a bug, not a convenience.  Use :func:`rat_from_float`
when a decimal really is meant to be snapped to a nearby rational.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

try:
    from gmpy2 import mpq as Rat

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Rat = Fraction
    HAVE_GMPY2 = False

ZERO = Rat(0)
ONE = Rat(1)

RatLike = Union[int, str, Fraction, "Rat"]

_EXACT_TYPES = (int, Fraction, type(ZERO))


def is_exact(x) -> bool:
    """True when x is an exact integer/rational (never a float)."""
    return isinstance(x, _EXACT_TYPES) and not isinstance(x, bool)


def rat(value: RatLike, den: RatLike | None = None) -> Rat:
    """Coerce to the rational carrier.  Floats raise TypeError."""
    if den is not None:
        return rat(value) / rat(den)
    if isinstance(value, type(ZERO)):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}; use rat_from_float")
    if isinstance(value, int):
        return Rat(value)
    if isinstance(value, Fraction):
        return Rat(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rat(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to rational")


def parse_rat(text: str) -> Rat:
    """Parse 'p/q' or a plain integer string."""
    s = text.strip()
    if "/" in s:
        num, _, den = s.partition("/")
        d = int(den)
        if d == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Rat(int(num), d)
    return Rat(int(s))


def rat_str(x) -> str:
    """Render as 'p/q', or 'p' when the denominator is 1."""
    q = rat(x)
    num, den = q.numerator, q.denominator
    return f"{num}/{den}" if den != 1 else str(num)


def rat_from_float(x: float, max_den: int = 10**9) -> Rat:
    f = Fraction(x).limit_denominator(max_den)
    return Rat(f.numerator, f.denominator)


def as_float(x) -> float:
    return float(x)


def sqrt_exact(x) -> Rat | None:
    """sqrt(x) as an exact rational, or None when x is not a perfect square."""
    q = rat(x)
    if q < 0:
        raise ValueError("sqrt of negative rational")
    num, den = int(q.numerator), int(q.denominator)
    rn = math.isqrt(num)
    if rn * rn != num:
        return None
    rd = math.isqrt(den)
    if rd * rd != den:
        return None
    return Rat(rn, rd)


def sqrt_lower(x, bits: int = 64) -> Rat:
    """Certified rational lower bound for sqrt(x): result**2 <= x."""
    q = rat(x)
    if q < 0:
        raise ValueError("sqrt of negative rational")
    if q == 0:
        return ZERO
    num, den = int(q.numerator), int(q.denominator)
    # sqrt(p/q) = sqrt(p*q)/q; scale by 4**bits for precision.
    scaled = num * den << (2 * bits)
    root = math.isqrt(scaled)  # root <= sqrt(scaled)
    return Rat(root, den << bits)


def sqrt_upper(x, bits: int = 64) -> Rat:
    """Certified rational upper bound for sqrt(x): result**2 >= x."""
    q = rat(x)
    if q < 0:
        raise ValueError("sqrt of negative rational")
    if q == 0:
        return ZERO
    num, den = int(q.numerator), int(q.denominator)
    scaled = num * den << (2 * bits)
    root = math.isqrt(scaled)
    if root * root < scaled:
        root += 1
    return Rat(root, den << bits)


def sqrt_value(x):
    """Exact rational sqrt when possible, float otherwise."""
    exact = sqrt_exact(x)
    if exact is not None:
        return exact
    return math.sqrt(float(x))
