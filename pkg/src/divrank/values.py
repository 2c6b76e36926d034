"""Rank values and how they are compared.

Most models produce exact values (``int`` or :class:`fractions.Fraction`).
Relational ranks are logarithms of row counts; they are carried as
:class:`LogCount` so that sums become products of integers and no float ever
enters an equality test.  Entropy and float-valued tables are compared with an
absolute tolerance.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Real
from typing import Optional, Union

DEFAULT_TOLERANCE = 1e-9


class LogCount:
    """The value ``log2(count)`` for a positive integer ``count``.

    Addition multiplies counts, so ``log2(a) + log2(b) == log2(a*b)`` is
    decided on integers.
    """

    __slots__ = ("count",)

    def __init__(self, count: int):
        count = int(count)
        if count < 1:
            raise ValueError(f"LogCount needs a positive count, got {count}")
        self.count = count

    def __add__(self, other):
        if isinstance(other, LogCount):
            return LogCount(self.count * other.count)
        if other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def _other_count(self, other):
        if isinstance(other, LogCount):
            return other.count
        if isinstance(other, (int, Fraction)) and other == 0:
            return 1
        return None

    def __eq__(self, other):
        c = self._other_count(other)
        if c is None:
            if isinstance(other, Real):
                return float(self) == float(other)
            return NotImplemented
        return self.count == c

    def __hash__(self):
        return hash(("log2", self.count))

    def __lt__(self, other):
        c = self._other_count(other)
        if c is None:
            return float(self) < float(other)
        return self.count < c

    def __le__(self, other):
        c = self._other_count(other)
        if c is None:
            return float(self) <= float(other)
        return self.count <= c

    def __gt__(self, other):
        c = self._other_count(other)
        if c is None:
            return float(self) > float(other)
        return self.count > c

    def __ge__(self, other):
        c = self._other_count(other)
        if c is None:
            return float(self) >= float(other)
        return self.count >= c

    def __float__(self):
        return math.log2(self.count)

    def __repr__(self):
        return f"LogCount({self.count})"

    def __str__(self):
        c = self.count
        if c & (c - 1) == 0:
            return str(c.bit_length() - 1)
        return f"log2({c})"


RankNumber = Union[int, Fraction, float, LogCount]


def is_exact(v) -> bool:
    return isinstance(v, (int, Fraction, LogCount)) and not isinstance(v, bool)


def to_exact(v) -> Union[int, Fraction]:
    """Parse ``3``, ``"3/4"``, ``"2.1"`` or a Fraction into an exact number."""
    if isinstance(v, bool):
        raise TypeError("booleans are not rank values")
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    if isinstance(v, str):
        f = Fraction(v.strip())
        return f.numerator if f.denominator == 1 else f
    raise TypeError(f"cannot read {v!r} as an exact rational")


def values_equal(a, b, tolerance: Optional[float]) -> bool:
    if tolerance is None:
        return a == b
    return abs(float(a) - float(b)) <= tolerance


def value_le(a, b, tolerance: Optional[float]) -> bool:
    if tolerance is None:
        return a <= b
    return float(a) <= float(b) + tolerance


def format_value(v) -> str:
    """Human-readable form: exact decimals where they exist, ``p/q`` otherwise."""
    if isinstance(v, LogCount):
        return str(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        d = v.denominator
        twos = fives = 0
        while d % 2 == 0:
            d //= 2
            twos += 1
        while d % 5 == 0:
            d //= 5
            fives += 1
        if d == 1:
            places = max(twos, fives)
            scaled = v * 10**places
            sign = "-" if scaled < 0 else ""
            digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
            return f"{sign}{digits[:-places]}.{digits[-places:]}".rstrip("0").rstrip(".")
        return f"{v.numerator}/{v.denominator}"
    return f"{float(v):.12g}"


def json_value(v):
    """Machine-readable form: ints stay ints, rationals become ``"p/q"`` strings."""
    if isinstance(v, LogCount):
        return {"log2": v.count}
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return float(v)
