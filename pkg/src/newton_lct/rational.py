"""Scalar helpers: exact rationals (``fractions.Fraction``) plus a tagged infinity."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Union


@total_ordering
class Infinity:
    """Positive infinity as a value distinct from every rational.

    Only the operations the invariants need are supported: comparison with
    rationals, addition of a finite value, and scaling by a positive rational.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __hash__(self):
        return hash("newton_lct.inf")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if other <= 0:
            raise ValueError("infinity may only be scaled by a positive number")
        return self

    __rmul__ = __mul__

    def __truediv__(self, other):
        if other <= 0:
            raise ValueError("infinity may only be divided by a positive number")
        return self

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()

Extended = Union[Fraction, Infinity]


def is_inf(x) -> bool:
    return x is INF


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to ``Fraction``; floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        # gmpy2.mpq and friends
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def reciprocal(x: Extended) -> Extended:
    """1/x with the conventions 1/0 = inf and 1/inf = 0."""
    if x is INF:
        return Fraction(0)
    if x == 0:
        return INF
    return 1 / x


def format_rational(x: Extended) -> str:
    if x is INF:
        return "inf"
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Extended:
    if isinstance(s, str) and s.strip() in ("inf", "+inf", "infinity"):
        return INF
    return as_fraction(s)
