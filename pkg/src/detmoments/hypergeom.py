"""Exact evaluation of terminating generalized hypergeometric sums at
unit argument.

pFq(upper; lower; 1) = sum_j  prod_i (upper_i)_j / (prod_i (lower_i)_j j!)

Only terminating series are supported: some upper parameter must be a
non-positive integer, which kills every term beyond a finite index.  The
sum is evaluated by the exact term-ratio recurrence, so the cost is one
rational multiply per retained term.

A vanishing lower Pochhammer at an index where the running numerator is
still nonzero is a genuine 0-division in the series; it raises
:class:`DegenerateDenominator` instead of being silently patched, because
the correct value then depends on a limit the caller must choose
explicitly (see ``treat_sum_as_one``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .rational import RationalLike


class DegenerateDenominator(ArithmeticError):
    """A lower Pochhammer vanished while the numerator product was nonzero."""


class NonTerminating(ValueError):
    """No upper parameter is a non-positive integer; the series never stops."""


@dataclass(frozen=True)
class HypergeometricSpec:
    """Parameter lists of a terminating pFq evaluated at unit argument.

    ``treat_sum_as_one`` short-circuits evaluation and returns 1; it exists
    for formulas documented to use that replacement at degenerate indices.
    """

    upper: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]
    treat_sum_as_one: bool = False

    @staticmethod
    def of(upper: Sequence[RationalLike], lower: Sequence[RationalLike],
           treat_sum_as_one: bool = False) -> "HypergeometricSpec":
        return HypergeometricSpec(
            tuple(Fraction(u) for u in upper),
            tuple(Fraction(l) for l in lower),
            treat_sum_as_one,
        )


def _termination_index(upper: tuple[Fraction, ...]) -> int:
    """Smallest j at which an upper Pochhammer factor hits zero."""
    stops = [-u for u in upper if u.denominator == 1 and u <= 0]
    if not stops:
        raise NonTerminating(f"no non-positive integer among upper={upper}")
    return int(min(stops))


def pfq_unit(spec: HypergeometricSpec) -> Fraction:
    """Evaluate the terminating sum of ``spec`` exactly.

    Terms are retained up to (and including) the last index before an
    upper factor vanishes; beyond that every term is exactly zero.
    """
    if spec.treat_sum_as_one:
        return Fraction(1)
    stop = _termination_index(spec.upper)

    total = Fraction(1)
    term = Fraction(1)
    for j in range(stop + 1):
        num = Fraction(1)
        for u in spec.upper:
            num *= u + j
        if num == 0:
            break
        den = Fraction(j + 1)
        for l in spec.lower:
            den *= l + j
        if den == 0:
            raise DegenerateDenominator(
                f"lower parameter vanished at term {j + 1} "
                f"(upper={spec.upper}, lower={spec.lower})")
        term = term * num / den
        total += term
    return total
