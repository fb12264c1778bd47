"""Streaming Monte Carlo estimation of the determinantal moment grid
<|rho_pt|^n |rho|^k>.

Accumulators are mergeable value objects, one per worker.  Grid sums are
kept in double-double (hi/lo) compensated form, so entries spanning the
~1e-116 magnitudes reached at n = k = 24 keep ~32 significant digits of
relative accuracy.  A separate univariate accumulator works in the
signed-log domain for powers of several hundred, where the raw power
values underflow IEEE doubles entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, TextIO

import numpy as np

from .sampler import det_batch, partial_transpose


class ShapeMismatch(ValueError):
    """Accumulators of different grid shapes cannot be merged."""


class InsufficientData(ValueError):
    """Estimates need at least two samples."""


def _two_sum(hi: np.ndarray, lo: np.ndarray, v: np.ndarray) -> None:
    """Add v into the double-double pair (hi, lo) in place."""
    s = hi + v
    bb = s - hi
    err = (hi - (s - bb)) + (v - bb)
    lo += err
    hi[...] = s


class MomentAccumulator:
    """Mergeable compensated sums of |rho_pt|^n |rho|^k on an
    (max_n+1) x (max_k+1) grid."""

    def __init__(self, max_n: int = 24, max_k: int = 24):
        if max_n < 0 or max_k < 0:
            raise ValueError("grid bounds must be nonnegative")
        self.max_n = max_n
        self.max_k = max_k
        self.count = 0
        shape = (max_n + 1, max_k + 1)
        self._sum_hi = np.zeros(shape)
        self._sum_lo = np.zeros(shape)
        self._sq_hi = np.zeros(shape)
        self._sq_lo = np.zeros(shape)

    # -- accumulation ------------------------------------------------------

    def accumulate(self, rho: np.ndarray) -> None:
        """Update every grid entry from one density matrix."""
        d = det_batch(rho[np.newaxis])[0]
        d_pt = det_batch(partial_transpose(rho[np.newaxis]))[0]
        self.accumulate_dets(np.array([d_pt]), np.array([d]))

    def accumulate_dets(self, det_pt: np.ndarray, det_rho: np.ndarray,
                        chunk: int = 4096) -> None:
        """Update the grid from precomputed determinant pairs.

        Powers are built multiplicatively (cumulative products); each
        chunk is pairwise-summed and folded into the running double-double
        totals.
        """
        det_pt = np.asarray(det_pt, dtype=float).ravel()
        det_rho = np.asarray(det_rho, dtype=float).ravel()
        if det_pt.shape != det_rho.shape:
            raise ShapeMismatch("determinant arrays differ in length")
        for start in range(0, len(det_pt), chunk):
            p = det_pt[start:start + chunk]
            d = det_rho[start:start + chunk]
            pt_pows = np.ones((len(p), self.max_n + 1))
            if self.max_n:
                pt_pows[:, 1:] = np.cumprod(
                    np.repeat(p[:, None], self.max_n, axis=1), axis=1)
            d_pows = np.ones((len(d), self.max_k + 1))
            if self.max_k:
                d_pows[:, 1:] = np.cumprod(
                    np.repeat(d[:, None], self.max_k, axis=1), axis=1)
            vals = pt_pows[:, :, None] * d_pows[:, None, :]
            _two_sum(self._sum_hi, self._sum_lo, vals.sum(axis=0))
            _two_sum(self._sq_hi, self._sq_lo, (vals * vals).sum(axis=0))
            self.count += len(p)

    # -- combination and readout -------------------------------------------

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        """New accumulator equal to this one plus ``other``."""
        if (self.max_n, self.max_k) != (other.max_n, other.max_k):
            raise ShapeMismatch(
                f"grids {(self.max_n, self.max_k)} vs "
                f"{(other.max_n, other.max_k)}")
        out = MomentAccumulator(self.max_n, self.max_k)
        out.count = self.count + other.count
        out._sum_hi = self._sum_hi.copy()
        out._sum_lo = self._sum_lo.copy()
        out._sq_hi = self._sq_hi.copy()
        out._sq_lo = self._sq_lo.copy()
        _two_sum(out._sum_hi, out._sum_lo, other._sum_hi)
        _two_sum(out._sum_hi, out._sum_lo, other._sum_lo)
        _two_sum(out._sq_hi, out._sq_lo, other._sq_hi)
        _two_sum(out._sq_hi, out._sq_lo, other._sq_lo)
        return out

    def sums(self) -> np.ndarray:
        return self._sum_hi + self._sum_lo

    def estimates(self) -> tuple[np.ndarray, np.ndarray]:
        """(mean, standard error) grids."""
        if self.count < 2:
            raise InsufficientData(f"need >= 2 samples, have {self.count}")
        mean = self.sums() / self.count
        second = (self._sq_hi + self._sq_lo) / self.count
        var = np.maximum(second - mean * mean, 0.0)
        se = np.sqrt(var / (self.count - 1))
        return mean, se


def merge(a: MomentAccumulator, b: MomentAccumulator) -> MomentAccumulator:
    return a.merge(b)


# ---------------------------------------------------------------------------
# Signed-log accumulation for univariate high powers.
# ---------------------------------------------------------------------------

def _combine_scaled(scale_a, sum_a, scale_b, sum_b):
    """Combine two (scale, mantissa-sum) pairs meaning sum * exp(scale)."""
    scale = np.maximum(scale_a, scale_b)
    with np.errstate(under="ignore"):
        out = sum_a * np.exp(scale_a - scale) + sum_b * np.exp(scale_b - scale)
    return scale, out


class LogMomentAccumulator:
    """Mergeable sums of x^n for n = 0..max_power in the signed-log
    domain: the stored pair (scale_n, m_n) means sum_i x_i^n = m_n e^(scale_n).

    Handles |x| around 1e-3 raised to powers of several hundred, far below
    the double-precision underflow threshold.
    """

    def __init__(self, max_power: int):
        if max_power < 0:
            raise ValueError("max_power must be nonnegative")
        self.max_power = max_power
        self.count = 0
        n = max_power + 1
        self._scale = np.full(n, -np.inf)
        self._m = np.zeros(n)
        self._scale2 = np.full(n, -np.inf)
        self._m2 = np.zeros(n)

    def add_values(self, x: np.ndarray, chunk: int = 8192) -> None:
        x = np.asarray(x, dtype=float).ravel()
        powers = np.arange(self.max_power + 1)
        for start in range(0, len(x), chunk):
            xs = x[start:start + chunk]
            sign = np.where(xs < 0, -1.0, 1.0)
            with np.errstate(divide="ignore"):
                logs = np.log(np.abs(xs))
            lmax = logs.max() if len(logs) else -np.inf
            # exponent matrix n * log|x_i|, stabilized per power
            expo = powers[:, None] * logs[None, :]
            zero = ~np.isfinite(expo)
            scale = powers * lmax
            with np.errstate(under="ignore", invalid="ignore"):
                mat = np.exp(expo - scale[:, None])
            mat[zero] = 0.0
            mat[0, :] = 1.0  # x^0 = 1 including x = 0
            signs = np.where(powers[:, None] % 2 == 1, sign[None, :], 1.0)
            bsum = (signs * mat).sum(axis=1)
            self._scale, self._m = _combine_scaled(
                self._scale, self._m, scale, bsum)
            # squares: x^(2n)
            scale2 = 2 * powers * lmax
            with np.errstate(under="ignore", invalid="ignore"):
                mat2 = np.exp(2 * expo - scale2[:, None])
            mat2[zero] = 0.0
            mat2[0, :] = 1.0
            self._scale2, self._m2 = _combine_scaled(
                self._scale2, self._m2, scale2, mat2.sum(axis=1))
            self.count += len(xs)

    def merge(self, other: "LogMomentAccumulator") -> "LogMomentAccumulator":
        if self.max_power != other.max_power:
            raise ShapeMismatch("max_power differs")
        out = LogMomentAccumulator(self.max_power)
        out.count = self.count + other.count
        out._scale, out._m = _combine_scaled(
            self._scale, self._m, other._scale, other._m)
        out._scale2, out._m2 = _combine_scaled(
            self._scale2, self._m2, other._scale2, other._m2)
        return out

    def mean_sign_log10(self) -> tuple[np.ndarray, np.ndarray]:
        """Mean of x^n as (sign, log10|mean|); log10 is -inf at zero."""
        if self.count < 1:
            raise InsufficientData("no samples")
        sign = np.sign(self._m)
        with np.errstate(divide="ignore"):
            log10 = (self._scale + np.log(np.abs(self._m))
                     - math.log(self.count)) / math.log(10.0)
        return sign, log10

    def se_log10(self) -> np.ndarray:
        """log10 of the standard error of each mean."""
        if self.count < 2:
            raise InsufficientData(f"need >= 2 samples, have {self.count}")
        # var = E[x^2n] - mean^2, all in log space
        sign, mean_l10 = self.mean_sign_log10()
        with np.errstate(divide="ignore"):
            second_l10 = (self._scale2 + np.log(np.abs(self._m2))
                          - math.log(self.count)) / math.log(10.0)
        mean_sq_l10 = 2 * mean_l10
        hi = np.maximum(second_l10, mean_sq_l10)
        with np.errstate(under="ignore", invalid="ignore"):
            var = np.power(10.0, second_l10 - hi) - np.power(10.0, mean_sq_l10 - hi)
        var = np.maximum(var, 0.0)
        with np.errstate(divide="ignore"):
            return 0.5 * (np.log10(var) + hi - math.log10(self.count - 1))


# ---------------------------------------------------------------------------
# Table output.
# ---------------------------------------------------------------------------

def fraction_sign_log10(value: Fraction) -> tuple[int, float]:
    """(sign, log10|value|) of an exact fraction of any magnitude."""
    if value == 0:
        return 0, -math.inf
    sign = 1 if value > 0 else -1
    v = abs(value)
    return sign, (math.log(v.numerator) - math.log(v.denominator)) / math.log(10)


def sci_str(sign: float, log10: float, digits: int = 9) -> str:
    """Scientific-notation string from a signed log10 magnitude."""
    if sign == 0 or log10 == -math.inf:
        return "0"
    expo = math.floor(log10)
    mant = 10.0 ** (log10 - expo)
    if round(mant, digits) >= 10.0:
        mant /= 10.0
        expo += 1
    return f"{'-' if sign < 0 else ''}{mant:.{digits}f}e{expo:+03d}"


def write_ratio_table(acc: MomentAccumulator,
                      exact_provider: Callable[[int, int], Fraction],
                      out: TextIO, metadata: Optional[dict] = None,
                      measure: str = "", variant: str = "",
                      alpha: str = "") -> None:
    """CSV of the moment grid against exact values.

    Schema: n,k,mc,exact,ratio,se,count,measure,variant,alpha with
    deterministic n-major row order.  Rows whose exact value is zero leave
    the ratio field empty.
    """
    for key, value in (metadata or {}).items():
        out.write(f"# {key}={value}\n")
    out.write("n,k,mc,exact,ratio,se,count,measure,variant,alpha\n")
    mean, se = acc.estimates()
    for n in range(acc.max_n + 1):
        for k in range(acc.max_k + 1):
            exact = exact_provider(n, k)
            exact_f = float(exact)
            if exact == 0:
                ratio = ""
            else:
                ratio = repr(float(mean[n, k]) / exact_f)
            out.write(f"{n},{k},{float(mean[n, k])!r},{exact_f!r},{ratio},"
                      f"{float(se[n, k])!r},{acc.count},{measure},{variant},"
                      f"{alpha}\n")


def write_univariate_table(acc: LogMomentAccumulator,
                           exact_provider: Callable[[int], Fraction],
                           out: TextIO, metadata: Optional[dict] = None,
                           measure: str = "", variant: str = "",
                           kind: str = "") -> None:
    """CSV of univariate power means against exact values, log-domain safe.

    Schema: n,mc,exact,ratio,se,count,measure,variant,kind; the mc, exact
    and se columns are scientific strings valid far below double
    underflow; ratio is a plain float (the magnitudes largely cancel).
    """
    for key, value in (metadata or {}).items():
        out.write(f"# {key}={value}\n")
    out.write("n,mc,exact,ratio,se,count,measure,variant,kind\n")
    sign, l10 = acc.mean_sign_log10()
    se_l10 = acc.se_log10()
    for n in range(acc.max_power + 1):
        exact = exact_provider(n)
        es, el10 = fraction_sign_log10(exact)
        if es == 0:
            ratio = ""
        else:
            rsign = sign[n] * es
            ratio = "" if sign[n] == 0 else repr(
                rsign * 10.0 ** (l10[n] - el10))
        out.write(f"{n},{sci_str(sign[n], l10[n])},{sci_str(es, el10)},"
                  f"{ratio},{sci_str(1, se_l10[n])},{acc.count},"
                  f"{measure},{variant},{kind}\n")
