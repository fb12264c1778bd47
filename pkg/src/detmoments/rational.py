"""Exact rational building blocks: factorials, Pochhammer symbols, and
half-integer gamma values.

Everything here is exact.  Plain quantities are `fractions.Fraction`;
quantities that are rational only after cancellation of sqrt(pi) factors
are carried as :class:`PiValue` (rational coefficient times an integer
power of sqrt(pi)), so the cancellation is checked rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[Fraction, int]

_SQRT_PI = math.sqrt(math.pi)


class PiResidue(ArithmeticError):
    """An uncancelled power of sqrt(pi) where a plain rational was required."""


def factorial(j: int) -> Fraction:
    """j! as an exact Fraction.  j must be a nonnegative integer."""
    if j < 0:
        raise ValueError(f"factorial of negative integer {j}")
    return Fraction(math.factorial(j))


def pochhammer(a: RationalLike, j: int) -> Fraction:
    """Rising factorial (a)_j = a (a+1) ... (a+j-1), with (a)_0 = 1."""
    if j < 0:
        raise ValueError(f"pochhammer order must be nonnegative, got {j}")
    a = Fraction(a)
    out = Fraction(1)
    for i in range(j):
        out *= a + i
        if out == 0:
            break
    return out


@dataclass(frozen=True)
class PiValue:
    """An exact value of the form coefficient * sqrt(pi)**sqrt_pi_power.

    Multiplication and division track the sqrt(pi) exponent; addition is
    only defined between values of equal exponent.  ``to_fraction`` raises
    :class:`PiResidue` unless the exponent has cancelled to zero.
    """

    coefficient: Fraction
    sqrt_pi_power: int = 0

    @staticmethod
    def of(value: RationalLike, sqrt_pi_power: int = 0) -> "PiValue":
        return PiValue(Fraction(value), sqrt_pi_power)

    def __mul__(self, other: "PiValue | RationalLike") -> "PiValue":
        if isinstance(other, PiValue):
            return PiValue(self.coefficient * other.coefficient,
                           self.sqrt_pi_power + other.sqrt_pi_power)
        return PiValue(self.coefficient * Fraction(other), self.sqrt_pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other: "PiValue | RationalLike") -> "PiValue":
        if isinstance(other, PiValue):
            if other.coefficient == 0:
                raise ZeroDivisionError("division by zero PiValue")
            return PiValue(self.coefficient / other.coefficient,
                           self.sqrt_pi_power - other.sqrt_pi_power)
        return PiValue(self.coefficient / Fraction(other), self.sqrt_pi_power)

    def __add__(self, other: "PiValue") -> "PiValue":
        if self.coefficient == 0:
            return other
        if other.coefficient == 0:
            return self
        if self.sqrt_pi_power != other.sqrt_pi_power:
            raise PiResidue(
                f"cannot add values with sqrt(pi) powers "
                f"{self.sqrt_pi_power} and {other.sqrt_pi_power}")
        return PiValue(self.coefficient + other.coefficient, self.sqrt_pi_power)

    def to_fraction(self) -> Fraction:
        if self.coefficient != 0 and self.sqrt_pi_power != 0:
            raise PiResidue(
                f"residual sqrt(pi)**{self.sqrt_pi_power} "
                f"(coefficient {self.coefficient})")
        return self.coefficient

    def to_float(self) -> float:
        return float(self.coefficient) * _SQRT_PI ** self.sqrt_pi_power


@dataclass(frozen=True)
class GammaHalf:
    """Gamma(m/2) stored exactly as coefficient * sqrt(pi)**sqrt_pi_power.

    sqrt_pi_power is 1 when m is odd (there is a lone Gamma(1/2) = sqrt(pi)
    factor) and 0 when m is even.
    """

    coefficient: Fraction
    sqrt_pi_power: int

    def as_pi_value(self) -> PiValue:
        return PiValue(self.coefficient, self.sqrt_pi_power)


def gamma_half(m: int) -> GammaHalf:
    """Gamma(m/2) for a positive integer m.

    Built from Gamma(1/2) = sqrt(pi), Gamma(1) = 1 and the recursion
    Gamma(x+1) = x Gamma(x).
    """
    if m < 1:
        raise ValueError(f"gamma_half needs a positive integer, got {m}")
    if m % 2 == 0:
        return GammaHalf(factorial(m // 2 - 1), 0)
    # m odd: Gamma(m/2) = ((m-2)/2)((m-4)/2)...(1/2) * sqrt(pi)
    coeff = Fraction(1)
    x = Fraction(m, 2) - 1
    while x > 0:
        coeff *= x
        x -= 1
    return GammaHalf(coeff, 1)


def gamma_int_plus_half(n: int) -> GammaHalf:
    """Gamma(n + 1/2) for integer n >= 0; convenience wrapper."""
    return gamma_half(2 * n + 1)
