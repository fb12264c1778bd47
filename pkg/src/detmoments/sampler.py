"""Random density matrices under Hilbert-Schmidt and Bures measures, plus
the small fixed-dimension matrix operations (partial transpose,
determinants, eigenvalues) used on them.

Constructions (G an N x K Ginibre matrix, U Haar unitary):

    HS, complex:    rho = G G^dag / tr(G G^dag),           K = N
    HS, real:       rho = G G^T / tr(G G^T),               K = N + 1
    Bures, complex: rho = (1+U) G G^dag (1+U^dag) / tr(..), K = N
    Bures, real:    eigenvalues by exact rejection sampling from the
                    known Bures eigenvalue density, eigenvectors Haar
                    orthogonal.

The real HS case needs the extra Ginibre column to cancel the
det(rho)^((K-N-1)/2) prefactor of the induced Wishart eigenvalue density,
leaving the flat measure.  For real Bures no (1+O)G construction
reproduces the target (checked against the exact moment constants for
every plausible K and for O drawn from O(N) and SO(N)); instead the
measure is factored as (eigenvalue density) x (Haar eigenvectors), which
is exact because the Bures volume element is orthogonally invariant.  The
eigenvalue density is sampled by rejection from Dirichlet(1/2,..,1/2):
the acceptance ratio prod_{i<j} |l_i - l_j| / sqrt(l_i + l_j) never
exceeds 1 because |l_i - l_j| <= l_i + l_j <= 1.

All samplers are validated against the exact closed-form moment layer in
the test suite.

Randomness is counter-based (Philox) keyed by (seed, stream_id), so any
number of workers get reproducible, non-overlapping streams regardless of
scheduling.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .ensemble import Ensemble, Measure


class DimensionMismatch(ValueError):
    """The operation requires a different matrix dimension."""


@dataclass(frozen=True)
class EnsembleSpec:
    """What to sample and from which reproducible stream."""

    measure: Measure
    variant: Ensemble
    seed: int = 0
    stream_id: int = 0


def make_rng(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Counter-based generator; distinct stream_ids never share state."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream_id,))
    return np.random.Generator(np.random.Philox(ss))


def sample_ginibre(dim: int, complex_field: bool, rng: np.random.Generator,
                   size: int = 1, cols: int | None = None) -> np.ndarray:
    """(size, dim, cols) stack of Ginibre matrices (cols defaults to dim).

    Real entries are standard normal; complex entries have unit variance
    per complex entry (real and imaginary parts at variance 1/2).
    """
    cols = dim if cols is None else cols
    if complex_field:
        re = rng.standard_normal((size, dim, cols))
        im = rng.standard_normal((size, dim, cols))
        return (re + 1j * im) / math.sqrt(2)
    return rng.standard_normal((size, dim, cols))


def sample_haar(dim: int, complex_field: bool,
                rng: np.random.Generator, size: int = 1) -> np.ndarray:
    """(size, dim, dim) stack of Haar unitary (or orthogonal) matrices.

    QR of a Ginibre matrix with the R diagonal rephased to be positive,
    which makes the factorization unique and Q Haar-distributed.
    """
    g = sample_ginibre(dim, complex_field, rng, size)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    phase = d / np.abs(d)
    return q * phase[:, np.newaxis, :]


def _dirichlet_half(rng: np.random.Generator, dim: int, size: int) -> np.ndarray:
    """Dirichlet(1/2,...,1/2) draws via squared standard normals."""
    g = rng.standard_normal((size, dim)) ** 2
    return g / g.sum(axis=1, keepdims=True)


_REJECTION_BATCH = 1 << 17


def sample_bures_real_eigenvalues(dim: int, rng: np.random.Generator,
                                  size: int = 1) -> np.ndarray:
    """Eigenvalue tuples of real Bures random states, exact rejection.

    Proposes from Dirichlet(1/2,..,1/2), which carries the 1/sqrt(prod l)
    singular factor of the target; accepts with probability
    prod_{i<j} |l_i - l_j| / sqrt(l_i + l_j) <= 1.
    """
    out = np.empty((size, dim))
    filled = 0
    while filled < size:
        lam = _dirichlet_half(rng, dim, _REJECTION_BATCH)
        ratio = np.ones(_REJECTION_BATCH)
        for i in range(dim):
            for j in range(i + 1, dim):
                ratio *= np.abs(lam[:, i] - lam[:, j]) \
                    / np.sqrt(lam[:, i] + lam[:, j])
        accepted = lam[rng.random(_REJECTION_BATCH) < ratio]
        take = accepted[:size - filled]
        out[filled:filled + len(take)] = take
        filled += len(take)
    return out


def sample_density(spec: EnsembleSpec, rng: np.random.Generator,
                   size: int = 1) -> np.ndarray:
    """(size, dim, dim) stack of density matrices drawn per ``spec``.

    Hermitian, unit trace, positive semidefinite (up to roundoff).  Draws
    whose trace normalization would degenerate are resampled; this has
    probability zero and exists only for safety.
    """
    dim = spec.variant.dim
    cf = spec.variant.complex_field
    if spec.measure is Measure.BURES and not cf:
        lam = sample_bures_real_eigenvalues(dim, rng, size)
        q = sample_haar(dim, False, rng, size)
        return (q * lam[:, np.newaxis, :]) @ np.swapaxes(q, -1, -2)
    cols = dim if cf else dim + 1
    g = sample_ginibre(dim, cf, rng, size, cols)
    if spec.measure is Measure.BURES:
        u = sample_haar(dim, cf, rng, size)
        g = (np.eye(dim, dtype=u.dtype) + u) @ g
    w = g @ np.conjugate(np.swapaxes(g, -1, -2))
    tr = np.trace(w, axis1=-2, axis2=-1).real
    bad = ~(tr > 0)
    while np.any(bad):
        n_bad = int(bad.sum())
        w[bad] = sample_density(spec, rng, n_bad)
        tr[bad] = 1.0
        bad = ~(tr > 0)
    return w / tr[:, np.newaxis, np.newaxis]


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose on the second qubit of a 4x4 (or stacked) density matrix.

    Index convention: row 2i+j encodes the product basis state (i, j), so
    rho_pt[(i,j),(k,l)] = rho[(i,l),(k,j)].
    """
    if rho.shape[-2:] != (4, 4):
        raise DimensionMismatch(f"partial transpose needs 4x4, got {rho.shape}")
    stacked = rho.reshape(rho.shape[:-2] + (2, 2, 2, 2))
    nd = stacked.ndim
    perm = tuple(range(nd - 4)) + (nd - 4, nd - 1, nd - 2, nd - 3)
    return stacked.transpose(perm).reshape(rho.shape)


_PERMS_CACHE: dict[int, list[tuple[int, tuple[int, ...]]]] = {}


def _signed_perms(n: int):
    perms = _PERMS_CACHE.get(n)
    if perms is None:
        perms = []
        for p in itertools.permutations(range(n)):
            inversions = sum(1 for i in range(n) for j in range(i + 1, n)
                             if p[i] > p[j])
            perms.append((-1 if inversions % 2 else 1, p))
        _PERMS_CACHE[n] = perms
    return perms


def det(matrix: np.ndarray, precision: str = "standard") -> float:
    """Determinant of one small matrix.

    "standard" uses LU; "extended" evaluates the permutation expansion
    with compensated summation (math.fsum), which avoids the cancellation
    the LU path can suffer for nearly singular matrices.  Hermitian inputs
    have real determinants, so only the real part is returned.
    """
    if precision == "standard":
        out = np.linalg.det(matrix)
        return float(out.real) if np.iscomplexobj(matrix) else float(out)
    if precision != "extended":
        raise ValueError(f"unknown precision {precision!r}")
    n = matrix.shape[0]
    if np.iscomplexobj(matrix):
        terms = []
        for sign, p in _signed_perms(n):
            prod = complex(sign)
            for i, j in enumerate(p):
                prod *= complex(matrix[i, j])
            terms.append(prod.real)
        return math.fsum(terms)
    terms = []
    for sign, p in _signed_perms(n):
        prod = float(sign)
        for i, j in enumerate(p):
            prod *= float(matrix[i, j])
        terms.append(prod)
    return math.fsum(terms)


def det_batch(matrices: np.ndarray) -> np.ndarray:
    """Real determinants of a stack of Hermitian matrices."""
    out = np.linalg.det(matrices)
    return out.real if np.iscomplexobj(matrices) else out


def eigenvalues(rho: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix (or stack), sorted descending."""
    vals = np.linalg.eigvalsh(rho)
    return vals[..., ::-1]


def check_density(rho: np.ndarray, herm_tol: float = 1e-13,
                  trace_tol: float = 1e-13, eig_floor: float = -1e-12) -> bool:
    """Validate the density-matrix invariants for one matrix."""
    if np.abs(rho - np.conjugate(rho.T)).max() > herm_tol:
        return False
    if abs(np.trace(rho).real - 1.0) > trace_tol:
        return False
    return bool(np.linalg.eigvalsh(rho)[0] >= eig_floor)


def dump_draws(path, rhos: np.ndarray) -> None:
    """Append raw draws as binary rows of dim*dim doubles (complex: both
    parts interleaved), for external audit."""
    with open(path, "ab") as fh:
        fh.write(np.ascontiguousarray(rhos).tobytes())
