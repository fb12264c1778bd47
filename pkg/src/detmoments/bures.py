"""Exact Bures determinantal and monomial moments for 4x4 (two-qubit,
two-rebit) and 3x3 (retrit) random density matrices.

The determinant moments <|rho|^k> come from gamma-function closed forms
whose sqrt(pi) factors must cancel exactly (enforced through PiValue).
The mixed moments <|rho_pt| |rho|^k> come from published degree-5/degree-5
rational functions in k; their index conventions are not uniform, and the
ones implemented here were fixed against the explicitly tabulated
constants:

* two-qubit: the tabulated ratio function R satisfies
      R(k+1) = <|rho_pt| |rho|^k> / <|rho|^k>,
  e.g. R(1) = -1/256 = <|rho_pt|> and R(2) = -137/66560 which matches
  (-137/1124597760) / (1/16896).
* two-rebit: the tabulated ratio function S satisfies
      S(k) = <|rho_pt| |rho|^(k-1)> / <|rho|^k>,
  e.g. S(1) = -2663/105 = (-2663/860160) / (1/8192); S has a pole at 0.

The k = 2 and k = 3 two-rebit moments are positive (their published prime
factorizations carry spurious minus signs; the leading decimal fractions
and S(3) = +1257/7865, S(4) = +55252/92820 fix the signs).

Eigenvalue-monomial expectations E[l1^e1 l2^e2 l3^e3 l4^e4] use fixed
positions under the exchangeable (permutation-symmetric) eigenvalue
density.  That convention is pinned by an exact closure identity: the
degree-4 constants of both 4x4 ensembles satisfy

    4 E[l1^4] + 48 E[l1^3 l2] + 36 E[l1^2 l2^2]
      + 144 E[l1^2 l2 l3] + 24 E[l1 l2 l3 l4]  =  1

(the multinomial expansion of (l1+l2+l3+l4)^4 grouped by exponent
pattern), exactly, which fails for any other reading of the constants.
"""

from __future__ import annotations

import warnings
from fractions import Fraction

from .ensemble import Ensemble
from .fitseq import RationalFunction, recombine_partial_fractions
from .rational import PiValue, gamma_half


class UnknownFamily(KeyError):
    """No closed-form monomial family is registered for that pattern."""


class IdentityViolation(ArithmeticError):
    """A stated exact identity between published constants failed."""


class FormulaMismatchWarning(UserWarning):
    """Two published forms of the same formula disagree on recombination."""


def _g(m: int) -> PiValue:
    return gamma_half(m).as_pi_value()


def bures_det_moment(k: int, variant: Ensemble) -> Fraction:
    """<|rho|^k> under Bures measure, exact rational.

    Raises PiResidue if the sqrt(pi) factors of the gamma closed form do
    not cancel (which would indicate a transcription error).
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if variant is Ensemble.TWO_QUBIT:
        num = (PiValue.of(Fraction(315, 2 ** (8 * k + 1)))
               * _g(2 * k + 1) * _g(2 * k + 3) * _g(4 * k + 4))
        den = (PiValue.of(1, 1)
               * _g(2 * k + 6) * _g(2 * k + 8) * _g(4 * k + 9))
        return (num / den).to_fraction()
    if variant is Ensemble.TWO_REBIT:
        num = PiValue.of(3 * Fraction(2) ** (2 - 8 * k)) * _g(4 * k + 3)
        den = (PiValue.of(2 * k * k + 3 * k + 1, 1) * _g(4 * k + 8))
        return (num / den).to_fraction()
    if variant is Ensemble.RETRIT:
        num = PiValue.of(Fraction(2) ** (1 - 8 * k)) * _g(8 * k + 4)
        den = _g(6 * k + 6) * _g(2 * k + 4)
        return (num / den).to_fraction()
    raise ValueError(f"unknown ensemble {variant!r}")


# Published ratio functions, ascending coefficients.  The denominators are
# kept in the displayed factored scaling; RationalFunction normalizes.
QUBIT_PT_RATIO = RationalFunction.make(
    (-885, -1366, -681, -82, 36, 8),
    tuple(128 * c for c in (840, 2062, 1947, 883, 192, 16)),
)
REBIT_PT_RATIO = RationalFunction.make(
    (-384, -1099, -1032, -340, 128, 64),
    (0, 5, -8, -84, 128, 64),
)


def _qubit_pt_ratio(x: int) -> Fraction:
    j = Fraction(x)
    factored = ((j * (j * (2 * j * (2 * j * (2 * j + 9) - 41) - 681) - 1366) - 885)
                / (128 * (j + 2) * (j + 3) * (j + 4) * (4 * j + 5) * (4 * j + 7)))
    value = QUBIT_PT_RATIO(j)
    assert value == factored
    return value


def _rebit_pt_ratio(x: int) -> Fraction:
    j = Fraction(x)
    factored = ((j * (4 * j * (j * (16 * j * (j + 2) - 85) - 258) - 1099) - 384)
                / (j * (2 * j - 1) * (2 * j + 5) * (4 * j - 1) * (4 * j + 1)))
    value = REBIT_PT_RATIO(j)
    assert value == factored
    return value


def bures_pt_det_moment(k: int, variant: Ensemble) -> Fraction:
    """<|rho_pt| |rho|^k> under Bures measure, exact rational."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if variant is Ensemble.TWO_QUBIT:
        return _qubit_pt_ratio(k + 1) * bures_det_moment(k, variant)
    if variant is Ensemble.TWO_REBIT:
        return _rebit_pt_ratio(k + 1) * bures_det_moment(k + 1, variant)
    raise ValueError(f"no <|rho_pt| |rho|^k> closed form for {variant!r}")


def bures_pt_squared_moment_rebit() -> Fraction:
    """<|rho_pt|^2> for two-rebit systems under Bures measure."""
    return Fraction(50654227, 1307993702400)


# Monomial expectations E[l1^e1 ... l4^e4] at unit total weight; exact
# constants for the two 4x4 ensembles (exchangeable-eigenvalue reading).
BURES_MONOMIAL_CONSTANTS: dict[tuple[Ensemble, tuple[int, ...]], Fraction] = {
    (Ensemble.TWO_QUBIT, (1, 1, 1, 1)): Fraction(1, 16896),
    (Ensemble.TWO_QUBIT, (2, 1, 1, 0)): Fraction(43, 50688),
    (Ensemble.TWO_QUBIT, (2, 2, 0, 0)): Fraction(83, 16896),
    (Ensemble.TWO_QUBIT, (3, 1, 0, 0)): Fraction(457, 50688),
    (Ensemble.TWO_QUBIT, (4, 0, 0, 0)): Fraction(1127, 16896),
    (Ensemble.TWO_REBIT, (1, 1, 1, 1)): Fraction(1, 8192),
    (Ensemble.TWO_REBIT, (2, 1, 1, 0)): Fraction(41, 40960),
    (Ensemble.TWO_REBIT, (2, 2, 0, 0)): Fraction(1399, 286720),
    (Ensemble.TWO_REBIT, (3, 1, 0, 0)): Fraction(2507, 286720),
    (Ensemble.TWO_REBIT, (4, 0, 0, 0)): Fraction(18463, 286720),
}

# Weight of each degree-4 exponent pattern in the expansion of
# (l1+l2+l3+l4)^4 = 1: (number of position assignments) x (multinomial).
MONOMIAL_CLOSURE_WEIGHTS: dict[tuple[int, ...], int] = {
    (4, 0, 0, 0): 4,
    (3, 1, 0, 0): 48,
    (2, 2, 0, 0): 36,
    (2, 1, 1, 0): 144,
    (1, 1, 1, 1): 24,
}


def monomial_closure_sum(variant: Ensemble) -> Fraction:
    """Closure sum over the degree-4 monomial constants; must equal 1."""
    total = Fraction(0)
    for pattern, weight in MONOMIAL_CLOSURE_WEIGHTS.items():
        total += weight * BURES_MONOMIAL_CONSTANTS[(variant, pattern)]
    return total


class _Family:
    """One closed-form monomial-ratio family.

    ``pattern`` identifies the family: a zero-sum offset tuple means the
    exponents are (k,..,k) + pattern and the ratio is against <|rho|^k>
    (k >= 1); a nonnegative degree-8 base tuple means the exponents are
    pattern + (k,..,k) and the ratio is against <|rho|^(k+2)> (k >= 0).
    """

    def __init__(self, ratio: RationalFunction, min_k: int,
                 partial_fractions=None, factored=None):
        self.ratio = ratio
        self.min_k = min_k
        self.partial_fractions = partial_fractions
        self.factored = factored
        self._checked = False

    def value(self, k: int, key) -> Fraction:
        if k < self.min_k:
            raise ValueError(f"family {key} requires k >= {self.min_k}")
        if not self._checked:
            self._checked = True
            self._verify(key)
        return self.ratio(k)

    def _verify(self, key) -> None:
        if self.factored is not None and self.factored != self.ratio:
            warnings.warn(
                f"factored and expanded forms of family {key} disagree",
                FormulaMismatchWarning, stacklevel=3)
        if self.partial_fractions is not None:
            terms, const = self.partial_fractions
            recombined = recombine_partial_fractions(terms, const)
            if recombined != self.ratio:
                warnings.warn(
                    f"partial-fraction display of family {key} does not "
                    f"recombine to its polynomial ratio", FormulaMismatchWarning,
                    stacklevel=3)


def _rf(num, den) -> RationalFunction:
    return RationalFunction.make(num, den)


_REBIT_QUINTIC = (1701, 6642, 8700, 5080, 1344, 128)


def _poly_mul_lists(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


MONOMIAL_FAMILIES: dict[tuple[Ensemble, tuple[int, ...]], _Family] = {
    # ratios <l^((k,k,k,k)+offset)> / <|rho|^k>, k >= 1
    (Ensemble.TWO_QUBIT, (1, 0, 0, -1)): _Family(
        _rf((19, 20, 4), (-1, 0, 4)), 1),
    (Ensemble.TWO_QUBIT, (1, 1, -1, -1)): _Family(
        _rf((350, 556, 279, 56, 4), (0, -4, -1, 16, 4)), 1),
    (Ensemble.TWO_QUBIT, (2, 0, -1, -1)): _Family(
        _rf((770, 996, 439, 76, 4), (0, -4, -1, 16, 4)), 1),
    (Ensemble.TWO_QUBIT, (3, -1, -1, -1)): _Family(
        _rf((14490, 21536, 11631, 2774, 276, 8), (0, -4, -9, 14, 36, 8)), 1),
    (Ensemble.TWO_REBIT, (1, 0, 0, -1)): _Family(
        _rf((11, 22, 8), (-1, -2, 8)), 1,
        partial_fractions=([(-4, (4, 1)), (8, (2, -1))], 1)),
    (Ensemble.TWO_REBIT, (1, 1, -1, -1)): _Family(
        _rf((545, 1624, 1452, 512, 64), (5, -8, -84, 128, 64)), 1),
    (Ensemble.TWO_REBIT, (2, 0, -1, -1)): _Family(
        _rf((1325, 3064, 2364, 704, 64), (5, -8, -84, 128, 64)), 1),
    (Ensemble.TWO_REBIT, (3, -1, -1, -1)): _Family(
        _rf((7680, 20057, 18712, 7596, 1280, 64),
            (0, 5, -8, -84, 128, 64)), 1),
    # ratios <l^(base+(k,k,k,k))> / <|rho|^(k+2)>, k >= 0
    (Ensemble.TWO_REBIT, (3, 2, 2, 1)): _Family(
        _rf((87, 54, 8), (27, 30, 8)), 0),
    (Ensemble.TWO_REBIT, (3, 3, 2, 0)): _Family(
        _rf((87213, 125922, 70284, 19000, 2496, 128), _REBIT_QUINTIC), 0,
        partial_fractions=([(Fraction(176, 63), (4, 9)), (-334, (6, 9)),
                            (495, (14, 7)), (1260, (44, 77)),
                            (Fraction(-5, 99), (2, 9))], 1)),
    (Ensemble.TWO_REBIT, (4, 3, 1, 0)): _Family(
        _rf((1596285, 2936118, 2096676, 751304, 143008, 13696, 512),
            _poly_mul_lists((5, 4), _REBIT_QUINTIC)), 0,
        partial_fractions=([(Fraction(5, 858), (2, 9)), (675, (4, 2)),
                            (Fraction(-184, 3), (4, 9)), (6480, (44, 77)),
                            (-14700, (52, 65)), (-6, (2, 3))], 1)),
    (Ensemble.TWO_REBIT, (5, 2, 1, 0)): _Family(
        _rf((6699810, 14589933, 12867318, 5978260, 1576840, 234144, 17792, 512),
            _poly_mul_lists((2, 1), _poly_mul_lists((5, 4), _REBIT_QUINTIC))), 0,
        partial_fractions=([(Fraction(-175, 2574), (2, 9)),
                            (Fraction(-122500, 39), (4, 5)),
                            (Fraction(17492, 63), (4, 9)), (-1936, (6, 9)),
                            (55740, (44, 77)), (32765, (84, 42)),
                            (Fraction(-1792, 3), (1, 2))], 1)),
    # retrit ratios <l^((k,k,k)+offset)> / <|rho|^k>, k >= 1
    (Ensemble.RETRIT, (1, 0, -1)): _Family(
        _rf((13, 36, 16), (-2, -4, 16)), 1,
        partial_fractions=([(-5, (12, 3)), (Fraction(35, 6), (2, -1))], 1)),
    (Ensemble.RETRIT, (2, -1, -1)): _Family(
        _rf((101, 308, 224, 32), (1, -2, -16, 32)), 1),
}


def bures_monomial_ratio(pattern, k: int, variant: Ensemble) -> Fraction:
    """Closed-form monomial/determinant moment ratio for a known family.

    ``pattern`` is either a zero-sum exponent offset (value is the ratio
    of <l^((k,..,k)+pattern)> to <|rho|^k>) or a degree-8 nonnegative base
    (ratio of <l^(pattern+(k,..,k))> to <|rho|^(k+2)>).  On first use the
    published redundant forms of the family (factored / partial-fraction
    displays) are recombined and compared; a discrepancy is a warning, not
    an error, since the polynomial ratio is authoritative.
    """
    key = (variant, tuple(int(x) for x in pattern))
    family = MONOMIAL_FAMILIES.get(key)
    if family is None:
        raise UnknownFamily(f"no registered family for {key}")
    return family.value(k, key)


def rebit_first_moment_identity() -> Fraction:
    """Check the linear-combination identity that produces the two-rebit
    <|rho_pt|> from four monomial constants plus 33/50 of the determinant
    expectation; returns the value (-2663/860160) or raises."""
    c = BURES_MONOMIAL_CONSTANTS
    value = (Fraction(26, 75) * c[(Ensemble.TWO_REBIT, (2, 1, 1, 0))]
             + Fraction(53, 300) * c[(Ensemble.TWO_REBIT, (2, 2, 0, 0))]
             - Fraction(2, 15) * c[(Ensemble.TWO_REBIT, (3, 1, 0, 0))]
             - Fraction(1, 20) * c[(Ensemble.TWO_REBIT, (4, 0, 0, 0))]
             + Fraction(33, 409600))
    expected = bures_pt_det_moment(0, Ensemble.TWO_REBIT)
    if value != expected:
        raise IdentityViolation(
            f"monomial combination gives {value}, moment table gives {expected}")
    return value
