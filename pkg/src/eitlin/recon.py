"""One-step linearized reconstruction.

The images F P_j eta occupy disjoint diagonals, so recovering eta from a
measured ND perturbation splits into independent ridge problems
    min_c ||F^{|j|} c - d_j||^2 + alpha ||c||^2,
one per angular frequency j, where d_j is the positive-quadrant part of
diagonal j. By orthonormality of the Zernike basis the ridge penalty is
the L^2(D) norm of the reconstructed perturbation.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .frechet import NDPerturbation, TriangularBlock, abs_block, apply
from .zernike import SpectralPerturbation

__all__ = ["ReconConfig", "SingularBlockError", "solve_block", "reconstruct",
           "positive_quadrant", "add_noise", "block_condition_numbers"]

log = logging.getLogger(__name__)


class SingularBlockError(np.linalg.LinAlgError):
    """Unregularized least-squares problem without a unique solution."""


@dataclass
class ReconConfig:
    mmax: int
    jmax: int
    kmax: int
    alpha: float = 0.0
    noise: float = 0.0

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.noise < 0:
            raise ValueError("noise level must be nonnegative")
        if self.mmax < 1 or self.jmax < 0 or self.kmax < 0:
            raise ValueError("truncations must be positive")


def solve_block(block: TriangularBlock | np.ndarray, d, alpha: float = 0.0,
                rcond: float = 1e-13) -> np.ndarray:
    """Ridge solution of block @ c ~ d.

    alpha = 0 with a square block is a plain triangular solve; otherwise the
    problem is solved by QR of the stacked matrix [block; sqrt(alpha) I].
    A rank-deficient system at alpha = 0 raises SingularBlockError.
    """
    A = block.entries if isinstance(block, TriangularBlock) else np.asarray(block, float)
    d = np.asarray(d)
    if d.shape != (A.shape[0],):
        raise ValueError(f"data length {d.shape} does not match block rows {A.shape[0]}")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    K = A.shape[1]
    if alpha == 0.0:
        if A.shape[0] < K:
            raise SingularBlockError("underdetermined block at alpha = 0")
        if A.shape[0] == K:
            diag = np.abs(np.diag(A))
            if diag.min(initial=np.inf) <= rcond * diag.max(initial=0.0):
                raise SingularBlockError("triangular block has a vanishing diagonal")
            return la.solve_triangular(A, d, lower=True)
        Q, R = np.linalg.qr(A)
        rd = np.abs(np.diag(R))
        if rd.min() <= rcond * rd.max():
            raise SingularBlockError("normal system is singular at alpha = 0")
        return la.solve_triangular(R, Q.T @ d)
    stacked = np.vstack([A, np.sqrt(alpha) * np.eye(K)])
    rhs = np.concatenate([d, np.zeros(K, dtype=d.dtype)])
    Q, R = np.linalg.qr(stacked)
    return la.solve_triangular(R, Q.T @ rhs)


def positive_quadrant(nd: NDPerturbation, j: int, mmax: int) -> np.ndarray:
    """Entries of diagonal j with m, m+j > 0, ordered by the row min(m, m+j) = 1..mmax-|j|."""
    rows = mmax - abs(j)
    out = np.zeros(max(rows, 0), dtype=complex)
    if j not in nd.diagonals:
        return out
    for m, v in zip(nd.rows(j), nd.diagonals[j]):
        n = m + j
        if m > 0 and n > 0 and max(m, n) <= mmax:
            out[min(m, n) - 1] = v
    return out


def negative_quadrant(nd: NDPerturbation, j: int, mmax: int) -> np.ndarray:
    """Mirror image of ``positive_quadrant``: a^j_{m,m+j} with m, m+j < 0 at row min(-m-j, -m)."""
    rows = mmax - abs(j)
    out = np.zeros(max(rows, 0), dtype=complex)
    if j not in nd.diagonals:
        return out
    for m, v in zip(nd.rows(j), nd.diagonals[j]):
        n = m + j
        if m < 0 and n < 0 and max(-m, -n) <= mmax:
            out[min(-n, -m) - 1] = v
    return out


def _window_block(j_abs: int, rows: int, K: int) -> np.ndarray:
    # columns beyond `rows` are structurally zero in the window
    A = np.zeros((rows, K))
    kk = min(K, rows)
    if kk:
        A[:, :kk] = -abs_block(j_abs, rows, kk)
    return A


def reconstruct(nd: NDPerturbation, cfg: ReconConfig, quadrant: str = "positive") -> SpectralPerturbation:
    """Recover Zernike coefficients |j| <= jmax, k <= kmax from F(eta) data."""
    if nd.mmax < cfg.mmax:
        raise ValueError(f"data window mmax={nd.mmax} is smaller than cfg.mmax={cfg.mmax}")
    if quadrant not in ("positive", "negative"):
        raise ValueError("quadrant must be 'positive' or 'negative'")
    extract = positive_quadrant if quadrant == "positive" else negative_quadrant
    out = SpectralPerturbation.zeros(cfg.jmax, cfg.kmax)
    if not nd.diagonals or not any(np.any(v) for v in nd.diagonals.values()):
        log.warning("empty ND data; returning a zero coefficient table")
        return out
    K = cfg.kmax + 1
    for j in range(-cfg.jmax, cfg.jmax + 1):
        rows = cfg.mmax - abs(j)
        if rows <= 0 or j not in nd.diagonals:
            continue
        d = extract(nd, j, cfg.mmax)
        out.blocks[j] = solve_block(_window_block(abs(j), rows, K), d, cfg.alpha)
    return out


def add_noise(nd: NDPerturbation, sigma: float, rng: np.random.Generator) -> NDPerturbation:
    """I.i.d. complex Gaussian noise (std sigma per real and imaginary part) on every stored entry."""
    noisy = NDPerturbation(nd.mmax)
    for j in sorted(nd.diagonals):
        v = nd.diagonals[j]
        noisy.diagonals[j] = v + sigma * (rng.standard_normal(v.size) + 1j * rng.standard_normal(v.size))
    return noisy


def block_condition_numbers(cfg: ReconConfig) -> dict[int, float]:
    """2-norm condition numbers of the windowed blocks F^{|j|} used by ``reconstruct``."""
    out = {}
    for ja in range(cfg.jmax + 1):
        rows = cfg.mmax - ja
        if rows <= 0:
            continue
        s = np.linalg.svd(_window_block(ja, rows, cfg.kmax + 1), compute_uv=False)
        out[ja] = float(s[0] / s[-1]) if s[-1] > 0 else float("inf")
    return out


def round_trip(coeffs: SpectralPerturbation, cfg: ReconConfig) -> SpectralPerturbation:
    return reconstruct(apply(coeffs, cfg.mmax), cfg)
