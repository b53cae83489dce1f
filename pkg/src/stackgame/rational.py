"""Exact rational payoffs extended with the symbolic endpoints +-inf.

All equilibrium logic in this package compares payoffs exactly, so utilities
are `fractions.Fraction` values wrapped together with two symbolic
infinities. Infinities take part in comparisons only; arithmetic is defined
when at most one operand is infinite (the result is that infinity), and
raises otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class InfiniteArithmeticError(ArithmeticError):
    """Arithmetic combining two infinities is undefined."""


_FINITE, _NEG, _POS = 0, -1, 1

RationalLike = Union["ExtendedRational", Fraction, int, str]


class ExtendedRational:
    __slots__ = ("_sign", "_value")

    def __init__(self, value: RationalLike = 0):
        if isinstance(value, ExtendedRational):
            self._sign = value._sign
            self._value = value._value
            return
        if isinstance(value, str):
            text = value.strip()
            if text in ("inf", "+inf"):
                self._sign, self._value = _POS, None
                return
            if text == "-inf":
                self._sign, self._value = _NEG, None
                return
            self._sign, self._value = _FINITE, Fraction(text)
            return
        if isinstance(value, float):
            raise TypeError("floats are not exact; pass a Fraction, int or string")
        self._sign, self._value = _FINITE, Fraction(value)

    @classmethod
    def _make_infinite(cls, sign: int) -> "ExtendedRational":
        obj = cls.__new__(cls)
        obj._sign = sign
        obj._value = None
        return obj

    @property
    def is_finite(self) -> bool:
        return self._sign == _FINITE

    @property
    def value(self) -> Fraction:
        if self._value is None:
            raise InfiniteArithmeticError("infinite value has no finite part")
        return self._value

    def _key(self):
        # (sign bucket, finite value) gives the total order with -inf < finite < +inf
        return (self._sign, self._value if self._sign == _FINITE else 0)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._sign != other._sign:
            return self._sign < other._sign
        if self._sign != _FINITE:
            return False
        return self._value < other._value

    def __le__(self, other):
        lt = self.__lt__(other)
        if lt is NotImplemented:
            return NotImplemented
        return lt or self == other

    def __gt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other < self

    def __ge__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other <= self

    def __hash__(self):
        if self._sign == _FINITE:
            return hash(self._value)
        return hash(("extended-rational-inf", self._sign))

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._sign == _FINITE and other._sign == _FINITE:
            return ExtendedRational(self._value + other._value)
        if self._sign != _FINITE and other._sign != _FINITE:
            raise InfiniteArithmeticError("cannot add two infinities")
        return self if self._sign != _FINITE else other

    __radd__ = __add__

    def __neg__(self):
        if self._sign == _FINITE:
            return ExtendedRational(-self._value)
        return NEG_INF if self._sign == _POS else POS_INF

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._sign == _FINITE and other._sign == _FINITE:
            return ExtendedRational(self._value * other._value)
        raise InfiniteArithmeticError("cannot scale an infinity")

    __rmul__ = __mul__

    def __str__(self):
        if self._sign == _POS:
            return "inf"
        if self._sign == _NEG:
            return "-inf"
        return str(self._value)

    def __repr__(self):
        return f"ExtendedRational({str(self)!r})"


def _coerce(value):
    if isinstance(value, ExtendedRational):
        return value
    if isinstance(value, (int, Fraction)):
        return ExtendedRational(value)
    return NotImplemented


POS_INF = ExtendedRational._make_infinite(_POS)
NEG_INF = ExtendedRational._make_infinite(_NEG)

ZERO = ExtendedRational(0)


def rat(value: RationalLike) -> ExtendedRational:
    """Shorthand constructor used throughout tests and builders."""
    return ExtendedRational(value)


def vector_str(payoffs) -> str:
    """Render a payoff vector the way the CLI prints it: ``(0, 1)``."""
    return "(" + ", ".join(str(v) for v in payoffs) + ")"
