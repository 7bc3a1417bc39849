"""Scalar helpers for the two numeric modes.

Rational mode carries `fractions.Fraction` through every computation, so
identities that hold on paper hold bit-exactly here.  Float mode carries
ordinary floats.  The mode is implicit in the number type; trees and
solutions remember which mode they were built in via an `exact` flag.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[Fraction, float, int]

FLOAT_TOL = 1e-12

RATIONAL = "rational"
FLOAT = "float"


def parse_scalar(x, exact: bool) -> Number:
    """Parse a JSON-ish scalar into the requested numeric mode.

    Exact mode accepts ints and strings ("0.8", "4/5"); bare floats are
    rejected because their binary value is not the decimal the user wrote.
    """
    if isinstance(x, bool):
        raise ValueError(f"not a number: {x!r}")
    if exact:
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, Fraction):
            return x
        if isinstance(x, float):
            raise ValueError(
                f"rational mode needs exact literals (got float {x!r}); "
                "write it as a string, e.g. \"0.8\""
            )
        raise ValueError(f"not a number: {x!r}")
    if isinstance(x, str):
        return float(Fraction(x))
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, Fraction):
        return float(x)
    raise ValueError(f"not a number: {x!r}")


def format_scalar(x: Number) -> str:
    """Serialize: exact fractions as "p/q", floats as repr."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def is_exact(x: Number) -> bool:
    return isinstance(x, (Fraction, int))


def power(x: Number, s) -> Number:
    """x**s for x >= 0, staying exact when s is a nonnegative integer."""
    if isinstance(s, int) or (isinstance(s, Fraction) and s.denominator == 1):
        return x ** int(s)
    if isinstance(s, float) and s.is_integer():
        return x ** int(s)
    if isinstance(s, complex):
        xf = float(x)
        if xf == 0.0:
            return 0.0
        import cmath

        return cmath.exp(s * cmath.log(xf))
    return float(x) ** float(s)


def close(a: Number, b: Number, exact: bool, tol: float = FLOAT_TOL) -> bool:
    if exact:
        return a == b
    return abs(float(a) - float(b)) <= tol


def one_minus(p: Number) -> Number:
    return 1 - p if isinstance(p, (Fraction, int)) else 1.0 - p
