"""Matrix representation of the linearized ND map at unit conductivity.

For a Zernike function psi_{j,k} and boundary Fourier modes
f_m = exp(i m theta) / sqrt(2 pi), the coefficient
a^{j,k}_{m,n} = <(F psi_{j,k}) f_m, f_n> is nonzero only on the diagonal
n = m + j, inside the quadrants m n > 0, and for k < min(|m|, |n|). The
diagonal carries the lower-triangular matrix F^{|j|} applied to the
coefficient vector c^j = [c_{j,0}, c_{j,1}, ...].
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .zernike import SpectralPerturbation

__all__ = [
    "TriangularBlock",
    "NDPerturbation",
    "entry",
    "entry_gamma",
    "abs_block",
    "assemble_block",
    "block_apply",
    "apply",
    "hs_norm",
    "diagonal_positions",
]

INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


def entry(j: int, k: int, m: int, n: int) -> float:
    """Closed-form coefficient a^{j,k}_{m,n}.

    The product over i is accumulated one factor at a time; every factor
    lies in (0, 1], so the partial products never overflow.
    """
    if k < 0:
        raise ValueError(f"radial order must be nonnegative, got k={k}")
    if m == 0 or n == 0 or n != m + j or m * n < 0:
        return 0.0
    lo = min(abs(m), abs(n))
    if k >= lo:
        return 0.0
    ja = abs(j)
    prod = 1.0
    for i in range(1, k + 1):
        prod *= (lo - i) / (ja + lo + k - i)
    return -INV_SQRT_PI * math.sqrt(ja + 2 * k + 1) / (lo + ja + k) * prod


def _log_gamma_ratio(j_abs: int, m: int, k) -> float:
    # ln[Gamma(m) Gamma(m+|j|+1) / (Gamma(m-k+1) Gamma(m+|j|+k))], grouped so k=1 gives exactly 0
    return ((math.lgamma(m) - math.lgamma(m - k + 1))
            + (math.lgamma(m + j_abs + 1) - math.lgamma(m + j_abs + k)))


def entry_gamma(j: int, k: int, m: int) -> float:
    """|F^{|j|}_{m,k}| through log-gamma functions, 1 <= k <= m."""
    if k < 1 or k > m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    ja = abs(j)
    return (INV_SQRT_PI * math.sqrt(2 * k + ja - 1) / (m + ja)
            * math.exp(_log_gamma_ratio(ja, m, k)))


def abs_block(j_abs: int, M: int, K: int) -> np.ndarray:
    """Array of |F^{|j|}_{m,k}| for 1 <= m <= M, 1 <= k <= K (zero above the diagonal).

    Uses the cumulative product |F_{m,k}| ∝ prod_{i<k} (m - i)/(m + |j| + i)
    along each row, which matches ``entry`` to a few ulps per factor.
    """
    j_abs = abs(int(j_abs))
    m = np.arange(1, M + 1, dtype=float)[:, None]
    k = np.arange(1, K + 1, dtype=float)[None, :]
    ratio = np.ones((M, K))
    if K > 1:
        i = np.arange(1, K, dtype=float)[None, :]
        factors = np.maximum((m - i) / (m + j_abs + i), 0.0)
        ratio[:, 1:] = np.cumprod(factors, axis=1)
    out = INV_SQRT_PI * np.sqrt(2 * k + j_abs - 1) / (m + j_abs) * ratio
    return np.where(k <= m, out, 0.0)


@dataclass
class TriangularBlock:
    """Finite section F^{|j|}[1..M, 1..K] (rows m, columns k, both 1-based)."""

    j_abs: int
    entries: np.ndarray

    @property
    def M(self) -> int:
        return self.entries.shape[0]

    @property
    def K(self) -> int:
        return self.entries.shape[1]

    def __matmul__(self, vec):
        return self.entries @ vec


def assemble_block(j_abs: int, M: int, K: int) -> TriangularBlock:
    if not 1 <= K <= M:
        raise ValueError(f"need 1 <= K <= M, got M={M}, K={K}")
    return TriangularBlock(abs(int(j_abs)), -abs_block(j_abs, M, K))


def block_apply(j_abs: int, rows: int, c: np.ndarray) -> np.ndarray:
    """F^{|j|}[1..rows, :] @ c, where columns past `rows` are structurally zero."""
    c = np.asarray(c)
    if rows <= 0:
        return np.zeros(0, dtype=np.result_type(c, float))
    K = min(c.shape[0], rows)
    if K == 0:
        return np.zeros(rows, dtype=np.result_type(c, float))
    return assemble_block(j_abs, rows, K).entries @ c[:K]


def diagonal_positions(j: int, mmax: int) -> np.ndarray:
    """Row indices m (ascending) of the admissible entries (m, m+j) in the window."""
    m = np.arange(-mmax, mmax + 1)
    n = m + j
    keep = (m != 0) & (n != 0) & (np.abs(n) <= mmax)
    return m[keep]


@dataclass
class NDPerturbation:
    """Matrix of F(eta) on Fourier modes |m|, |n| <= mmax, stored by diagonal.

    ``diagonals[j]`` holds a^j_{m,m+j} for the rows ``diagonal_positions(j, mmax)``.
    """

    mmax: int
    diagonals: dict[int, np.ndarray] = field(default_factory=dict)

    def rows(self, j: int) -> np.ndarray:
        return diagonal_positions(j, self.mmax)

    def get(self, m: int, n: int) -> complex:
        j = n - m
        if j not in self.diagonals or m == 0 or n == 0 or max(abs(m), abs(n)) > self.mmax:
            return 0j
        idx = np.searchsorted(self.rows(j), m)
        return complex(self.diagonals[j][idx])

    def to_dense(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense matrix indexed by the nonzero modes; returns (modes, matrix)."""
        modes = np.array([m for m in range(-self.mmax, self.mmax + 1) if m != 0])
        pos = {int(m): i for i, m in enumerate(modes)}
        mat = np.zeros((modes.size, modes.size), dtype=complex)
        for j, vals in self.diagonals.items():
            for m, v in zip(self.rows(j), vals):
                mat[pos[int(m)], pos[int(m + j)]] = v
        return modes, mat


def apply(coeffs: SpectralPerturbation, mmax: int) -> NDPerturbation:
    """F(eta) restricted to Fourier modes 0 < |m|, |n| <= mmax."""
    if mmax < 1:
        raise ValueError("mmax must be at least 1")
    dropped = [j for j in range(-coeffs.jmax, coeffs.jmax + 1)
               if abs(j) > 2 * mmax and np.any(coeffs.blocks[j])]
    if dropped:
        warnings.warn(f"dropped diagonals outside the Fourier window: {dropped}", stacklevel=2)
    out = NDPerturbation(mmax)
    jlim = min(coeffs.jmax, 2 * mmax)
    for j in range(-jlim, jlim + 1):
        ja = abs(j)
        rows = diagonal_positions(j, mmax)
        vals = np.zeros(rows.size, dtype=complex)
        # positive quadrant rows min(m, m+j) = 1..mmax-|j|
        prod = block_apply(ja, mmax - ja, coeffs.blocks[j])
        for idx, m in enumerate(rows):
            n = m + j
            if m > 0 and n > 0:
                vals[idx] = prod[min(m, n) - 1]
            elif m < 0 and n < 0:
                # mirror: a^j_{m,m+j} = a^j_{-m-j,-m}, whose row is min(-m-j, -m)
                vals[idx] = prod[min(-n, -m) - 1]
        out.diagonals[j] = vals
    return out


def hs_norm(nd: NDPerturbation) -> float:
    """Hilbert-Schmidt (Frobenius) norm over every stored entry."""
    total = 0.0
    for j in sorted(nd.diagonals):
        total += float(np.sum(np.abs(nd.diagonals[j]) ** 2))
    return math.sqrt(total)
