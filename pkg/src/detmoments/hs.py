"""Exact Hilbert-Schmidt determinantal moments of 4x4 density matrices.

The closed forms are parameterized by the Dyson-like index alpha
(1/2 = real/two-rebit, 1 = complex/two-qubit, 2 = quaternionic) and give

* ``hs_det_moment``        <|rho|^k>
* ``hs_pt_moment``         <|rho_pt|^n>
* ``hs_balanced_moment``   <(|rho| |rho_pt|)^n>
* ``hs_bivariate_moment``  <|rho_pt|^n |rho|^k>

as exact rationals.  Independently of those formulas, the module carries
an exact integration oracle over the eigenvalue simplex
(``hs_monomial_exact``): expectations of eigenvalue monomials under the
density proportional to prod_{i<j} |l_i - l_j|^(2 alpha), computed by
expanding polynomials and summing Dirichlet integrals

    int_simplex l1^a l2^b l3^c l4^d  dl1 dl2 dl3 = a! b! c! d! / (a+b+c+d+3)!

For alpha = 1/2 the absolute Vandermonde is only piecewise polynomial, so
the simplex is split into its 24 ordering sectors; each sector maps to a
standard simplex through gap coordinates and is integrated exactly.

Monomial expectations use fixed eigenvalue positions under the symmetric
(exchangeable) joint density; the multinomial closure over all degree-4
exponent patterns sums to exactly 1 in this convention.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .hypergeom import HypergeometricSpec, pfq_unit
from .rational import RationalLike, factorial, pochhammer

ALPHA_TWO_REBIT = Fraction(1, 2)
ALPHA_TWO_QUBIT = Fraction(1)
ALPHA_TWO_QUATERBIT = Fraction(2)


class UnsupportedAlpha(ValueError):
    """The exact simplex oracle only covers alpha in {1/2, 1}."""


def _check_index(name: str, value: int) -> int:
    if not isinstance(value, int) or value < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")
    return value


def hs_det_moment(k: int, alpha: RationalLike) -> Fraction:
    """<|rho|^k> under Hilbert-Schmidt measure, exact."""
    _check_index("k", k)
    a = Fraction(alpha)
    num = factorial(k) * pochhammer(a + 1, k) * pochhammer(2 * a + 1, k)
    den = (Fraction(2) ** (6 * k)
           * pochhammer(3 * a + Fraction(3, 2), k)
           * pochhammer(6 * a + Fraction(5, 2), 2 * k))
    return num / den


def hs_pt_moment(n: int, alpha: RationalLike) -> Fraction:
    """<|rho_pt|^n> under Hilbert-Schmidt measure, exact.

    The closed form is stated for n >= 1; n = 0 is the normalization 1.
    At n = 1 the embedded 5F4 is degenerate (a lower parameter 1-n hits
    zero) and is replaced by 1, which is the documented special case.
    """
    _check_index("n", n)
    if n == 0:
        return Fraction(1)
    a = Fraction(alpha)
    common = (pochhammer(3 * a + Fraction(3, 2), n)
              * pochhammer(6 * a + Fraction(5, 2), 2 * n))
    first = (factorial(n) * pochhammer(a + 1, n) * pochhammer(2 * a + 1, n)
             / (Fraction(2) ** (6 * n) * common))
    pre = (pochhammer(-2 * n - 1 - 5 * a, n) * pochhammer(a, n)
           * pochhammer(a + Fraction(1, 2), n)
           / (Fraction(2) ** (4 * n) * common))
    f54 = pfq_unit(HypergeometricSpec.of(
        upper=[-Fraction(n - 2, 2), -Fraction(n - 1, 2), -n, a + 1, 2 * a + 1],
        lower=[1 - n, n + 2 + 5 * a, 1 - n - a, Fraction(1, 2) - n - a],
        treat_sum_as_one=(n == 1),
    ))
    return first + pre * f54


def hs_balanced_moment(n: int, alpha: RationalLike) -> Fraction:
    """<(|rho| |rho_pt|)^n> under Hilbert-Schmidt measure, exact."""
    _check_index("n", n)
    a = Fraction(alpha)
    pre = (factorial(2 * n) * pochhammer(1 + a, 2 * n) * pochhammer(1 + 2 * a, 2 * n)
           / (Fraction(2) ** (12 * n)
              * pochhammer(3 * a + Fraction(3, 2), 2 * n)
              * pochhammer(6 * a + Fraction(5, 2), 4 * n)))
    f43 = pfq_unit(HypergeometricSpec.of(
        upper=[-n, a, a + Fraction(1, 2), -4 * n - 1 - 5 * a],
        lower=[-2 * n - a, -2 * n - 2 * a, Fraction(1, 2) - n],
    ))
    return pre * f43


def hs_bivariate_ratio(n: int, k: int, alpha: RationalLike) -> Fraction:
    """<|rho_pt|^n |rho|^k> / <|rho|^k>, exact, for n, k >= 1.

    The generic formula does not reduce to the univariate moments on the
    n = 0 / k = 0 edges (its terminating sum collapses too early there),
    so the edges are handled by :func:`hs_bivariate_moment` instead.
    """
    a = Fraction(alpha)
    pre = (pochhammer(k + 1, n) * pochhammer(k + 1 + a, n)
           * pochhammer(k + 1 + 2 * a, n)
           / (Fraction(2) ** (6 * n)
              * pochhammer(k + 3 * a + Fraction(3, 2), n)
              * pochhammer(2 * k + 6 * a + Fraction(5, 2), 2 * n)))
    f54 = pfq_unit(HypergeometricSpec.of(
        upper=[-n, -k, a, a + Fraction(1, 2), -2 * k - 2 * n - 1 - 5 * a],
        lower=[-k - n - a, -k - n - 2 * a,
               -Fraction(k + n, 2), -Fraction(k + n - 1, 2)],
    ))
    return pre * f54


def hs_bivariate_moment(n: int, k: int, alpha: RationalLike) -> Fraction:
    """<|rho_pt|^n |rho|^k> under Hilbert-Schmidt measure, exact.

    Symmetric under n <-> k except on the n = 0 / k = 0 edges, where the
    dedicated univariate formulas apply.
    """
    _check_index("n", n)
    _check_index("k", k)
    if n == 0:
        return hs_det_moment(k, alpha)
    if k == 0:
        return hs_pt_moment(n, alpha)
    return hs_bivariate_ratio(n, k, alpha) * hs_det_moment(k, alpha)


def hs_pt_ratio_qubit(k: int) -> Fraction:
    """<|rho_pt| |rho|^k> / <|rho|^k> at alpha = 1, exact.

    Evaluates both printed forms of the degree-3 rational function and
    checks they agree before returning.
    """
    _check_index("k", k)
    x = Fraction(k)
    expanded = ((x ** 3 + 6 * x ** 2 - x - 42)
                / (256 * x ** 3 + 3456 * x ** 2 + 15536 * x + 23256))
    factored = ((x * (x * (x + 6) - 1) - 42)
                / (8 * (2 * x + 9) * (4 * x + 17) * (4 * x + 19)))
    assert expanded == factored
    return expanded


def hs_monomial_ratio_qubit(k: int) -> Fraction:
    """<l1^5 l2^2 l3 |rho|^k> / <|rho|^k> at alpha = 1, exact.

    Both published forms of the degree-6 rational function (expanded and
    factored) are evaluated and must agree.  The denominator here is
    <|rho|^k>: the exact simplex oracle confirms the function equals
    E[l1^(5+k) l2^(2+k) l3^(1+k) l4^k] / E[|rho|^k] at k = 0, 1, 2, and
    its k -> inf limit is (1/4)^8, the value of the monomial at the
    maximally mixed spectrum.
    """
    _check_index("k", k)
    x = Fraction(k)
    expanded_num = (x ** 6 + 50 * x ** 5 + 851 * x ** 4 + 6770 * x ** 3
                    + 27234 * x ** 2 + 52970 * x + 39084)
    expanded_den = 64 * (1024 * x ** 6 + 30720 * x ** 5 + 383104 * x ** 4
                         + 2542080 * x ** 3 + 9465796 * x ** 2
                         + 18753960 * x + 15444891)
    factored_num = ((x + 2) * (x + 3)
                    * (x * (x * (x * (x + 45) + 620) + 3400) + 6514))
    factored_den = (64 * (2 * x + 9) * (2 * x + 11) * (4 * x + 17)
                    * (4 * x + 19) * (4 * x + 21) * (4 * x + 23))
    expanded = expanded_num / expanded_den
    factored = factored_num / factored_den
    assert expanded == factored
    return expanded


# ---------------------------------------------------------------------------
# Exact polynomial integration over the eigenvalue simplex (the oracle).
# ---------------------------------------------------------------------------

_Mono = tuple[int, int, int, int]
_Poly = dict[_Mono, Fraction]


def _poly_mul(p: _Poly, q: _Poly) -> _Poly:
    out: _Poly = {}
    for ep, cp in p.items():
        for eq, cq in q.items():
            key = (ep[0] + eq[0], ep[1] + eq[1], ep[2] + eq[2], ep[3] + eq[3])
            c = out.get(key)
            out[key] = cp * cq if c is None else c + cp * cq
    return {e: c for e, c in out.items() if c != 0}


def _monomial(e: _Mono, coeff: Fraction = Fraction(1)) -> _Poly:
    return {tuple(e): coeff}


def _binomial(i: int, j: int, sign: int = 1) -> _Poly:
    """The factor (l_i - l_j), or (l_j - l_i) when sign = -1."""
    ei = [0, 0, 0, 0]
    ej = [0, 0, 0, 0]
    ei[i] = 1
    ej[j] = 1
    return {tuple(ei): Fraction(sign), tuple(ej): Fraction(-sign)}


@lru_cache(maxsize=None)
def _vandermonde() -> tuple:
    """prod_{i<j} (l_i - l_j); nonnegative on the sector l1>=l2>=l3>=l4."""
    v: _Poly = _monomial((0, 0, 0, 0))
    for i in range(4):
        for j in range(i + 1, 4):
            v = _poly_mul(v, _binomial(i, j))
    return tuple(v.items())


def _vandermonde_poly() -> _Poly:
    return dict(_vandermonde())


def _integrate_full(p: _Poly) -> Fraction:
    """Dirichlet integration of a 4-variable polynomial over the simplex.

    Integrates over (l1, l2, l3) with l4 = 1 - l1 - l2 - l3; each monomial
    contributes a! b! c! d! / (a+b+c+d+3)!.
    """
    total = Fraction(0)
    for (a, b, c, d), coeff in p.items():
        total += coeff * factorial(a) * factorial(b) * factorial(c) \
            * factorial(d) / factorial(a + b + c + d + 3)
    return total


# Gap substitution: on the sorted sector the eigenvalues are linear forms
# in scaled gap variables t with t1+t2+t3+t4 = 1 and Jacobian 1/24:
#   l4 = t1/4,  l3 = t1/4 + t2/3,  l2 = t1/4 + t2/3 + t3/2,
#   l1 = t1/4 + t2/3 + t3/2 + t4.
_GAP_FORMS = (
    (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1)),
    (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(0)),
    (Fraction(1, 4), Fraction(1, 3), Fraction(0), Fraction(0)),
    (Fraction(1, 4), Fraction(0), Fraction(0), Fraction(0)),
)


@lru_cache(maxsize=None)
def _gap_power(var: int, n: int) -> tuple:
    """(l_var)^n expanded as a polynomial in the scaled gap variables."""
    if n == 0:
        return tuple(_monomial((0, 0, 0, 0)).items())
    lower = dict(_gap_power(var, n - 1))
    form = {(
        1 if i == 0 else 0,
        1 if i == 1 else 0,
        1 if i == 2 else 0,
        1 if i == 3 else 0,
    ): c for i, c in enumerate(_GAP_FORMS[var]) if c != 0}
    return tuple(_poly_mul(lower, form).items())


def _to_gaps(p: _Poly) -> _Poly:
    out: _Poly = {}
    for (a, b, c, d), coeff in p.items():
        term = _monomial((0, 0, 0, 0), coeff)
        for var, exp in enumerate((a, b, c, d)):
            if exp:
                term = _poly_mul(term, dict(_gap_power(var, exp)))
        for e, cf in term.items():
            prev = out.get(e)
            out[e] = cf if prev is None else prev + cf
    return {e: c for e, c in out.items() if c != 0}


def _integrate_ordered(p: _Poly) -> Fraction:
    """Exact integral of ``p`` over the sorted sector l1>=l2>=l3>=l4>=0."""
    return _integrate_full(_to_gaps(p)) / 24


def _symmetrized_monomial(e: _Mono) -> _Poly:
    """Average of l^e over all 24 assignments of the exponents."""
    out: _Poly = {}
    for perm in itertools.permutations(e):
        prev = out.get(perm)
        out[perm] = Fraction(1, 24) if prev is None else prev + Fraction(1, 24)
    return out


@lru_cache(maxsize=None)
def _oracle_normalization(alpha: Fraction) -> Fraction:
    """int over the simplex of prod |l_i - l_j|^(2 alpha), exact."""
    v = _vandermonde_poly()
    if alpha == 1:
        return _integrate_full(_poly_mul(v, v))
    if alpha == Fraction(1, 2):
        return 24 * _integrate_ordered(v)
    raise UnsupportedAlpha(f"alpha={alpha} has no exact oracle")


def hs_normalization(alpha: RationalLike) -> Fraction:
    """Normalization constant of the eigenvalue density, exact.

    Reciprocal of the simplex integral of prod |l_i - l_j|^(2 alpha).
    """
    return 1 / _oracle_normalization(Fraction(alpha))


def hs_monomial_exact(exponents, alpha: RationalLike) -> Fraction:
    """E[l1^e1 l2^e2 l3^e3 l4^e4] under the Hilbert-Schmidt eigenvalue
    density, exact, for alpha in {1/2, 1}.

    alpha = 1: the squared Vandermonde times the monomial is a polynomial
    and integrates directly over the simplex.  alpha = 1/2: |V| is resolved
    sector by sector; summing the 24 sectors equals one sorted-sector
    integral of the symmetrized monomial against the positive Vandermonde.
    """
    e = tuple(int(x) for x in exponents)
    if len(e) != 4 or any(x < 0 for x in e):
        raise ValueError(f"need 4 nonnegative exponents, got {exponents!r}")
    a = Fraction(alpha)
    v = _vandermonde_poly()
    if a == 1:
        num = _integrate_full(_poly_mul(_monomial(e), _poly_mul(v, v)))
    elif a == Fraction(1, 2):
        num = 24 * _integrate_ordered(_poly_mul(_symmetrized_monomial(e), v))
    else:
        raise UnsupportedAlpha(f"alpha={a} has no exact oracle")
    return num / _oracle_normalization(a)
