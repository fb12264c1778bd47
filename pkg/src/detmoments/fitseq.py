"""Exact rational-function fitting for integer-indexed moment sequences.

Given exact sample values v(x_i) of a ratio of polynomials of known
degrees, the coefficients satisfy the homogeneous linear system

    v(x_i) * q(x_i) - p(x_i) = 0 ,

which is solved exactly over the rationals on deg_num + deg_den + 1
points; every remaining point is used as a hold-out check.  This replaces
interactive sequence-recognition with a reproducible computation.

Also provides exact recombination of partial-fraction displays
(sum of c / (a k + b) terms plus a constant) into a single reduced ratio,
used to cross-check the two printed forms of several moment formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .rational import RationalLike

_Coeffs = tuple[Fraction, ...]


class NoSolution(ValueError):
    """The fit system only admits degenerate (zero-denominator) solutions."""


class HoldoutMismatch(ValueError):
    """A held-out point is not matched: the sequence is not a rational
    function of the requested degrees."""


def _trim(c: Sequence[Fraction]) -> _Coeffs:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_eval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    out = Fraction(0)
    for coeff in reversed(c):
        out = out * x + coeff
    return out


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def _poly_divmod(a: _Coeffs, b: _Coeffs) -> tuple[list[Fraction], _Coeffs]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(rem) >= len(b) and any(c != 0 for c in rem):
        rem = list(_trim(rem))
        if len(rem) < len(b):
            break
        factor = rem[-1] / b[-1]
        shift = len(rem) - len(b)
        quot[shift] += factor
        for i, cb in enumerate(b):
            rem[shift + i] -= factor * cb
    return quot, _trim(rem)


def _poly_gcd(a: _Coeffs, b: _Coeffs) -> _Coeffs:
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if not a:
        return ()
    lead = a[-1]
    return tuple(c / lead for c in a)


@dataclass(frozen=True)
class RationalFunction:
    """A reduced ratio of polynomials in one variable.

    Coefficients are ascending.  Canonical form: gcd(num, den) = 1, the
    denominator has integer coefficients with content 1 and a positive
    leading coefficient.  Equal functions therefore compare equal.
    """

    numerator: _Coeffs
    denominator: _Coeffs

    @staticmethod
    def make(numerator: Iterable[RationalLike],
             denominator: Iterable[RationalLike]) -> "RationalFunction":
        num = _trim([Fraction(c) for c in numerator])
        den = _trim([Fraction(c) for c in denominator])
        if not den:
            raise ZeroDivisionError("zero denominator polynomial")
        if not num:
            return RationalFunction((Fraction(0),), (Fraction(1),))
        g = _poly_gcd(num, den)
        if len(g) > 1:
            num = _trim(_poly_divmod(num, g)[0])
            den = _trim(_poly_divmod(den, g)[0])
        # make the denominator integer-primitive with positive lead
        import math
        scale = Fraction(math.lcm(*(c.denominator for c in den)))
        den_i = [c * scale for c in den]
        content = Fraction(math.gcd(*(int(c) for c in den_i)))
        scale /= content
        if den_i[-1] < 0:
            scale = -scale
        return RationalFunction(tuple(c * scale for c in num),
                                tuple(c * scale for c in den))

    def degrees(self) -> tuple[int, int]:
        return len(self.numerator) - 1, len(self.denominator) - 1

    def __call__(self, x: RationalLike) -> Fraction:
        x = Fraction(x)
        den = _poly_eval(self.denominator, x)
        if den == 0:
            raise ZeroDivisionError(f"pole of rational function at {x}")
        return _poly_eval(self.numerator, x) / den


def _nullspace_vector(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """All basis vectors of the nullspace of the given exact matrix."""
    # exact Gauss-Jordan; row scaling keeps everything rational
    mat = [row[:] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [vi - f * vr for vi, vr in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -mat[row_idx][fc]
        basis.append(vec)
    return basis


def fit_rational_function(points: Sequence[tuple[RationalLike, RationalLike]],
                          deg_num: int, deg_den: int) -> RationalFunction:
    """Fit value = p(x)/q(x) with deg p <= deg_num, deg q <= deg_den.

    Needs at least deg_num + deg_den + 2 points so that at least one is
    held out; the fit is computed on the first deg_num + deg_den + 1
    points and verified exactly (cross-multiplied) on all of them.
    """
    pts = [(Fraction(x), Fraction(v)) for x, v in points]
    need = deg_num + deg_den + 2
    if len(pts) < need:
        raise ValueError(f"need at least {need} points, got {len(pts)}")
    if len({x for x, _ in pts}) != len(pts):
        raise ValueError("sample points must be distinct")

    ncols = deg_num + deg_den + 2
    rows = []
    for x, v in pts[:deg_num + deg_den + 1]:
        row = [-(x ** i) for i in range(deg_num + 1)]
        row += [v * x ** j for j in range(deg_den + 1)]
        rows.append(row)

    fitted = None
    for vec in _nullspace_vector(rows, ncols):
        num = vec[:deg_num + 1]
        den = vec[deg_num + 1:]
        if any(c != 0 for c in den):
            fitted = RationalFunction.make(num, den)
            break
    if fitted is None:
        raise NoSolution("every nullspace direction has a zero denominator")

    for x, v in pts:
        if (v * _poly_eval(fitted.denominator, x)
                != _poly_eval(fitted.numerator, x)):
            raise HoldoutMismatch(
                f"point ({x}, {v}) is not matched by the degree-"
                f"({deg_num},{deg_den}) fit")
    return fitted


def recombine_partial_fractions(
        terms: Sequence[tuple[RationalLike, tuple[RationalLike, RationalLike]]],
        constant: RationalLike = 0) -> RationalFunction:
    """Combine sum of coeff/(a*k + b) terms plus a constant exactly.

    The linear denominators must be pairwise distinct up to scaling.
    """
    dens = []
    for _, (a, b) in terms:
        a, b = Fraction(a), Fraction(b)
        if a == 0:
            raise ValueError("linear denominator must depend on k")
        dens.append((a, b))
    for i in range(len(dens)):
        for j in range(i + 1, len(dens)):
            ai, bi = dens[i]
            aj, bj = dens[j]
            if ai * bj == aj * bi:
                raise ValueError(f"duplicate denominator {dens[i]} ~ {dens[j]}")

    common: list[Fraction] = [Fraction(1)]
    for a, b in dens:
        common = _poly_mul(common, [b, a])
    num = [c * Fraction(constant) for c in common]
    for (coeff, _), (a, b) in zip(terms, dens):
        rest = [Fraction(1)]
        for a2, b2 in dens:
            if (a2, b2) != (a, b):
                rest = _poly_mul(rest, [b2, a2])
        contrib = [Fraction(coeff) * c for c in rest]
        for i, c in enumerate(contrib):
            num[i] += c
    return RationalFunction.make(num, common)
