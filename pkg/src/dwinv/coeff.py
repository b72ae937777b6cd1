"""Exact arithmetic in Q/Z."""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import ZeroDenominator


class CoeffValue:
    """An element of Q/Z stored as a reduced fraction ``num/den`` with ``0 <= num < den``."""

    __slots__ = ("num", "den")

    def __init__(self, num: int = 0, den: int = 1):
        if den == 0:
            raise ZeroDenominator("denominator is zero")
        if den < 0:
            num, den = -num, -den
        num %= den
        g = gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    def __setattr__(self, name, value):
        raise AttributeError("CoeffValue is immutable")

    def __reduce__(self):
        return (CoeffValue, (self.num, self.den))

    @classmethod
    def from_fraction(cls, value) -> "CoeffValue":
        """Accepts a ``Fraction``, an ``int``, a ``(num, den)`` pair or a ``"num/den"`` string."""
        if isinstance(value, CoeffValue):
            return value
        if isinstance(value, tuple):
            return cls(*value)
        if isinstance(value, str):
            text = value.strip()
            if "/" in text:
                n, d = text.split("/", 1)
                return cls(int(n), int(d))
            return cls(int(text), 1)
        f = Fraction(value)
        return cls(f.numerator, f.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __add__(self, other: "CoeffValue") -> "CoeffValue":
        if not isinstance(other, CoeffValue):
            return NotImplemented
        return CoeffValue(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "CoeffValue":
        return CoeffValue(-self.num, self.den)

    def __sub__(self, other: "CoeffValue") -> "CoeffValue":
        return self + (-other)

    def scale(self, k: int) -> "CoeffValue":
        return CoeffValue(k * self.num, self.den)

    def __mul__(self, k):
        if isinstance(k, int):
            return self.scale(k)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, CoeffValue):
            return self.num == other.num and self.den == other.den
        if other == 0:
            return self.num == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __lt__(self, other: "CoeffValue"):
        return self.as_fraction() < other.as_fraction()

    def __bool__(self):
        return self.num != 0

    def __float__(self):
        return self.num / self.den

    def __str__(self):
        return f"{self.num}/{self.den}"

    def __repr__(self):
        return f"CoeffValue({self.num}, {self.den})"


ZERO = CoeffValue(0, 1)


def add(a: CoeffValue, b: CoeffValue) -> CoeffValue:
    return a + b


def negate(a: CoeffValue) -> CoeffValue:
    return -a


def scale_by_int(a: CoeffValue, k: int) -> CoeffValue:
    return a.scale(k)


def from_fraction(num: int, den: int = 1) -> CoeffValue:
    return CoeffValue(num, den)
