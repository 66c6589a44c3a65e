"""Exact arithmetic in Z_(2), the rationals with odd denominator.

These are the scalars of every coefficient ring in the engine.  Internally we
lean on gmpy2.mpq for speed; the :class:`TwoLocalNumber` wrapper enforces the
odd-denominator invariant and carries the 2-adic valuation.
"""

from __future__ import annotations

import math

try:
    from gmpy2 import mpq as rational
except ImportError:  # pragma: no cover - gmpy2 is declared as a dependency
    from fractions import Fraction as rational

INFINITY = math.inf


class NumericError(ArithmeticError):
    """Base class for 2-local arithmetic failures."""


class EvenDenominator(NumericError):
    """The reduced denominator is even: the value does not live in Z_(2)."""


class NotAUnit(NumericError):
    """A 2-local-unit inverse was requested for a non-unit."""


class DivisionByZero(NumericError):
    pass


def two_adic_valuation(q) -> int | float:
    """2-adic valuation of an int or rational; +inf for zero.

    Negative values signal an even reduced denominator.
    """
    if isinstance(q, TwoLocalNumber):
        return q.valuation2()
    q = rational(q)
    if q == 0:
        return INFINITY
    num = int(q.numerator)
    den = int(q.denominator)
    v = 0
    while num % 2 == 0:
        num //= 2
        v += 1
    while den % 2 == 0:
        den //= 2
        v -= 1
    return v


def is_two_local(q) -> bool:
    """True when the reduced denominator of q is odd."""
    return int(rational(q).denominator) % 2 == 1


class TwoLocalNumber:
    """An exact rational with positive odd denominator, in lowest terms.

    Zero is uniquely 0/1; the sign lives on the numerator.
    """

    __slots__ = ("_q",)

    def __init__(self, numerator, denominator=1):
        if isinstance(numerator, TwoLocalNumber):
            numerator = numerator._q
        if denominator == 0:
            raise DivisionByZero("denominator is zero")
        q = rational(numerator, denominator)
        if int(q.denominator) % 2 == 0:
            raise EvenDenominator(f"{q} has an even reduced denominator")
        self._q = q

    @classmethod
    def from_rational(cls, q) -> "TwoLocalNumber":
        return cls(q)

    @property
    def numerator(self) -> int:
        return int(self._q.numerator)

    @property
    def denominator(self) -> int:
        return int(self._q.denominator)

    def as_rational(self):
        return self._q

    def valuation2(self) -> int | float:
        if self._q == 0:
            return INFINITY
        num = int(self._q.numerator)
        v = 0
        while num % 2 == 0:
            num //= 2
            v += 1
        return v

    def is_unit(self) -> bool:
        """Units of Z_(2) are the odd-over-odd values."""
        return self._q != 0 and self.numerator % 2 != 0

    def invert(self, unit_mode: bool = True) -> "TwoLocalNumber":
        if self._q == 0:
            raise DivisionByZero("cannot invert zero")
        if unit_mode and not self.is_unit():
            raise NotAUnit(f"{self} is not a unit of Z_(2)")
        return TwoLocalNumber(self.denominator, self.numerator)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return TwoLocalNumber(self._q + other)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return TwoLocalNumber(self._q - other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return TwoLocalNumber(other - self._q)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return TwoLocalNumber(self._q * other)

    __rmul__ = __mul__

    def __neg__(self):
        return TwoLocalNumber(-self._q)

    def __pow__(self, e: int):
        if e >= 0:
            return TwoLocalNumber(self._q**e)
        return self.invert(unit_mode=False) ** (-e)

    def __eq__(self, other):
        if isinstance(other, TwoLocalNumber):
            return self._q == other._q
        try:
            return self._q == rational(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self._q)

    def __bool__(self):
        return self._q != 0

    def __repr__(self):
        return f"TwoLocalNumber({self.numerator}, {self.denominator})"

    def __str__(self):
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"

    def to_json(self) -> dict:
        # Decimal strings so downstream consumers never overflow 64 bits.
        return {"num": str(self.numerator), "den": str(self.denominator)}

    @classmethod
    def from_json(cls, obj: dict) -> "TwoLocalNumber":
        return cls(int(obj["num"]), int(obj["den"]))


def _coerce(value):
    if isinstance(value, TwoLocalNumber):
        return value._q
    if isinstance(value, int):
        return rational(value)
    try:
        q = rational(value)
    except TypeError:
        return NotImplemented
    return q


def normalize(num: int, den: int) -> TwoLocalNumber:
    """Canonical 2-local form of num/den; raises EvenDenominator if impossible."""
    return TwoLocalNumber(num, den)


ZERO = TwoLocalNumber(0)
ONE = TwoLocalNumber(1)
