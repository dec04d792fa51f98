"""Orthonormal penalty basis of the regression space and canonical coefficients."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, List, Optional, Tuple

import numpy as np

from .layout import Layout, ls_baseline
from .penalty import DIFFERENCE, PenaltyMatrix


@dataclass(frozen=True, eq=False)
class PenaltyBasis:
    """Penalty basis ``U = X R^{-1/2} Gamma`` together with the data coordinates.

    Attributes
    ----------
    eigenvalues : numpy.ndarray, shape (p,)
        Ascending, nonnegative eigenvalues of ``B = R^{-1/2} D'D R^{-1/2}``.
    rotation : numpy.ndarray, shape (p, p)
        Orthogonal eigenvector matrix, columns ordered like ``eigenvalues``.
    counts : numpy.ndarray, shape (p,)
        Replication counts (the diagonal of R).
    z : numpy.ndarray, shape (p,)
        Canonical coefficients of the observations.
    residual_ss : float
        Within-level sum of squares, the energy of y outside the regression space.
    penalty : PenaltyMatrix
        Penalty that generated the basis.
    sigma2 : VarianceEstimate, optional
        Variance estimate attached by :func:`ordshrink.shrinkage.attach_variance`.
    """

    eigenvalues: np.ndarray
    rotation: np.ndarray
    counts: np.ndarray
    z: np.ndarray
    residual_ss: float
    penalty: Optional[PenaltyMatrix] = None
    sigma2: Any = None

    @property
    def p(self) -> int:
        return self.z.size

    @property
    def n(self) -> int:
        return int(self.counts.sum())


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    """Make the first largest-magnitude entry of each column positive."""
    mags = np.abs(vecs)
    # tolerance keeps near-ties from flipping on rounding noise
    lead = np.argmax(mags >= mags.max(axis=0) * (1 - 1e-9), axis=0)
    signs = np.sign(vecs[lead, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def symmetric_eigen(B: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix with ascending eigenvalues.

    Eigenvectors are sign-normalized so their first entry of largest
    magnitude is positive; eigenvalues within roundoff of zero are clamped.
    """
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError('asymmetric matrix')
    scale = max(1.0, np.max(np.abs(B)) if B.size else 1.0)
    if np.max(np.abs(B - B.T), initial=0.0) > 1e-12 * scale:
        raise ValueError('asymmetric matrix')
    try:
        lam, gamma = np.linalg.eigh((B + B.T) / 2)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError('eigensolver failed') from exc
    if np.any(lam < -1e-10 * scale):
        # callers pass positive semidefinite matrices; leave genuine negatives alone
        return lam, _fix_signs(gamma)
    return np.maximum(lam, 0.0), _fix_signs(gamma)


def _kernel_grid(pm: PenaltyMatrix, levels: np.ndarray) -> np.ndarray:
    # D_d annihilates polynomials in the index, A_d polynomials in the levels
    return np.arange(pm.p, dtype=float) if pm.kind == DIFFERENCE else levels


@lru_cache(maxsize=64)
def _spectrum(entries_key: bytes, shape: Tuple[int, int], degree: int,
              grid_key: bytes, counts_key: bytes) -> Tuple[np.ndarray, np.ndarray]:
    D = np.frombuffer(entries_key).reshape(shape)
    grid = np.frombuffer(grid_key)
    counts = np.frombuffer(counts_key)
    p = shape[1]
    root = np.sqrt(counts)

    # Kernel of D R^{-1/2}: R^{1/2} times polynomials of degree < d on the grid.
    # Building it explicitly gives a reproducible, polynomial-ordered kernel basis.
    u = grid - grid.mean()
    u = u / np.max(np.abs(u))
    vander = np.vander(u, degree, increasing=True) * root[:, None]
    kernel, r = np.linalg.qr(vander)
    kernel = kernel * np.sign(np.diag(r))

    # Remaining directions from the SVD of the factor D R^{-1/2}: squared singular
    # values keep full relative accuracy for the tiny eigenvalues of high-order penalties.
    _, sing, vt = np.linalg.svd(D / root, full_matrices=False)
    rows = vt[:p - degree][::-1].T
    sing = sing[:p - degree][::-1]
    rows = rows - kernel @ (kernel.T @ rows)
    q, r = np.linalg.qr(rows)
    rows = _fix_signs(q * np.sign(np.diag(r)))

    lam = np.concatenate([np.zeros(degree), sing ** 2])
    gamma = np.hstack([kernel, rows])
    lam.setflags(write=False)
    gamma.setflags(write=False)
    return lam, gamma


def _scaled_means(layout: Layout) -> np.ndarray:
    return np.sqrt(layout.counts) * ls_baseline(layout).group_means


def build_basis(layout: Layout, pm: PenaltyMatrix) -> PenaltyBasis:
    """Penalty basis for ``layout`` generated by ``pm``.

    The first ``pm.degree`` basis vectors span the penalty kernel (eigenvalue 0)
    and are the orthonormalized ``R^{1/2}``-weighted polynomials of increasing
    degree, so the first one is always proportional to ``sqrt(counts)``.
    """
    if pm.p != layout.p:
        raise ValueError('penalty/layout mismatch')
    counts = layout.counts.astype(float)
    grid = _kernel_grid(pm, layout.levels).astype(float)
    entries = np.ascontiguousarray(pm.entries, dtype=float)
    lam, gamma = _spectrum(entries.tobytes(), entries.shape, pm.degree,
                           np.ascontiguousarray(grid).tobytes(), counts.tobytes())
    base = ls_baseline(layout)
    z = gamma.T @ (np.sqrt(counts) * base.group_means)
    return PenaltyBasis(lam, gamma, layout.counts, z, base.residual_ss, pm)


def coefficients(basis: PenaltyBasis, layout: Layout) -> np.ndarray:
    """Canonical coefficients ``z_j = sum_i Gamma_ij sqrt(n_i) ybar_i``."""
    return basis.rotation.T @ _scaled_means(layout)


def with_data(basis: PenaltyBasis, layout: Layout) -> PenaltyBasis:
    """Same basis, coordinates recomputed for new observations on the same design."""
    if not np.array_equal(layout.counts, basis.counts):
        raise ValueError('penalty/layout mismatch')
    base = ls_baseline(layout)
    z = basis.rotation.T @ (np.sqrt(layout.counts) * base.group_means)
    return dataclasses.replace(basis, z=z, residual_ss=base.residual_ss, sigma2=None)


def reconstruct(basis: PenaltyBasis, xi_hat) -> Tuple[np.ndarray, np.ndarray]:
    """Map canonical estimates back: returns ``(eta_hat, mu_hat)``."""
    xi_hat = np.asarray(xi_hat, dtype=float)
    if xi_hat.shape != (basis.p,):
        raise ValueError('coefficient vector has wrong length')
    mu = (basis.rotation @ xi_hat) / np.sqrt(basis.counts)
    return np.repeat(mu, basis.counts), mu


def economy_profile(basis: PenaltyBasis) -> List[Tuple[int, float]]:
    """Signed square roots ``sgn(z_i) |z_i|^(1/2)`` indexed from 1."""
    vals = np.sign(basis.z) * np.sqrt(np.abs(basis.z))
    return [(i + 1, float(v)) for i, v in enumerate(vals)]
