"""Orthonormal Zernike basis on the unit disk.

The basis functions are

    psi_{j,k}(r, theta) = sqrt((|j| + 2k + 1) / pi) * R^{|j|}_{|j|+2k}(r) * exp(i j theta)

with the radial polynomial given by the usual alternating binomial sum.
Inner products are taken with a tensor rule: Gauss-Legendre in s = r**2
(where r dr = ds / 2 has a flat weight) times the trapezoid rule in theta.
Both factors are exact for the polynomial integrands used throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "FLOAT_SUM_LIMIT",
    "ZernikeIndex",
    "DiskGrid",
    "SpectralPerturbation",
    "radial_eval",
    "basis_eval",
    "analyze",
    "synthesize",
    "disk_grid",
    "sample_on_grid",
]

# Radial polynomials whose coefficient magnitudes sum past this are summed
# exactly; below it plain float accumulation loses at most ~1e-12.
FLOAT_SUM_LIMIT = 1e4


@dataclass(frozen=True)
class ZernikeIndex:
    j: int
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"radial order must be nonnegative, got k={self.k}")

    @property
    def degree(self) -> int:
        return abs(self.j) + 2 * self.k


@lru_cache(maxsize=4096)
def _radial_coefficients(j_abs: int, k: int) -> tuple[tuple[int, int], ...]:
    """(signed integer coefficient, power of r) for i = 0..k."""
    n = j_abs + 2 * k
    return tuple(((-1) ** i * math.comb(n - i, i) * math.comb(n - 2 * i, k - i), n - 2 * i)
                 for i in range(k + 1))


def _radial_exact(coefs, n: int, r: float) -> float:
    # r = a / 2^e exactly; the integer sum is exact and int / int rounds once
    a, b = r.as_integer_ratio()
    total = 0
    for c, p in coefs:
        total += c * a ** p * b ** (n - p)
    return total / b ** n


def radial_eval(j, k, r):
    """Radial Zernike polynomial R^{|j|}_{|j|+2k}(r).

    `r` may be a scalar or an array with entries in [0, 1]. The binomial
    coefficients are exact integers and the terms are accumulated in
    ascending order of the summation index. When the coefficients are large
    enough for floating-point cancellation to matter (sum of magnitudes
    above ``FLOAT_SUM_LIMIT``, i.e. from degree ~16 on) the sum is formed
    exactly in integer arithmetic and rounded once.
    """
    if k < 0:
        raise ValueError(f"radial order must be nonnegative, got k={k}")
    r_arr = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(r_arr)) or np.any(r_arr < 0.0) or np.any(r_arr > 1.0):
        raise ValueError("radial coordinate must lie in [0, 1]")
    j_abs = abs(int(j))
    n = j_abs + 2 * k
    coefs = _radial_coefficients(j_abs, k)
    if sum(abs(c) for c, _ in coefs) <= FLOAT_SUM_LIMIT:
        out = np.zeros_like(r_arr)
        for c, p in coefs:
            out = out + float(c) * r_arr ** p
    else:
        uniq, inv = np.unique(r_arr.ravel(), return_inverse=True)
        vals = np.array([_radial_exact(coefs, n, float(x)) for x in uniq])
        out = vals[inv].reshape(r_arr.shape)
    if np.ndim(r) == 0:
        return float(out)
    return out


def basis_eval(idx: ZernikeIndex, r, theta):
    """Orthonormal Zernike function psi_{j,k} at polar points (r, theta)."""
    norm = math.sqrt((idx.degree + 1) / math.pi)
    radial = radial_eval(idx.j, idx.k, r)
    theta = np.asarray(theta, dtype=float)
    # exp(i j theta) through cos/sin so that psi_{-j,k} is the exact conjugate
    angle = abs(idx.j) * theta
    phase = np.cos(angle) + 1j * np.sign(idx.j) * np.sin(angle)
    val = norm * radial * phase
    if np.ndim(val) == 0:
        return complex(val)
    return val


@dataclass(frozen=True)
class DiskGrid:
    """Tensor quadrature on the unit disk.

    ``weights`` integrate f(r) r dr over [0, 1]; the angular rule is the
    equispaced trapezoid with weight 2*pi/n_theta per node.
    """

    n_r: int
    n_theta: int
    r: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)

    @property
    def theta_weight(self) -> float:
        return 2.0 * math.pi / self.n_theta

    @property
    def max_frequency(self) -> int:
        """Largest angular frequency the trapezoid rule integrates exactly in products."""
        return (self.n_theta - 1) // 2

    @property
    def s_exactness(self) -> int:
        """Highest polynomial degree in s = r**2 integrated exactly."""
        return 2 * self.n_r - 1

    def mesh(self):
        return np.meshgrid(self.r, self.theta, indexing="ij")


@lru_cache(maxsize=256)
def disk_grid(n_r: int, n_theta: int) -> DiskGrid:
    if n_r < 1 or n_theta < 1:
        raise ValueError("grid sizes must be positive")
    x, w = np.polynomial.legendre.leggauss(n_r)
    s = 0.5 * (x + 1.0)
    r = np.sqrt(s)
    # int_0^1 f r dr = 1/2 int_0^1 f ds; GL weights on [0,1] are w/2
    weights = 0.25 * w
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    for a in (r, weights, theta):
        a.setflags(write=False)
    return DiskGrid(n_r, n_theta, r, weights, theta)


@dataclass
class SpectralPerturbation:
    """Truncated Zernike coefficient table, j-major with k ascending in each block."""

    jmax: int
    kmax: int
    blocks: dict[int, np.ndarray]

    def __post_init__(self):
        if self.jmax < 0 or self.kmax < 0:
            raise ValueError("truncation indices must be nonnegative")
        expected = set(range(-self.jmax, self.jmax + 1))
        if set(self.blocks) != expected:
            raise ValueError(f"blocks must be keyed by j in [-{self.jmax}, {self.jmax}]")
        for j, vec in self.blocks.items():
            vec = np.asarray(vec, dtype=complex)
            if vec.shape != (self.kmax + 1,):
                raise ValueError(f"block j={j} has length {vec.size}, expected {self.kmax + 1}")
            if not np.all(np.isfinite(vec)):
                raise ValueError(f"block j={j} has non-finite entries")
            self.blocks[j] = vec

    @classmethod
    def zeros(cls, jmax: int, kmax: int) -> SpectralPerturbation:
        return cls(jmax, kmax, {j: np.zeros(kmax + 1, complex) for j in range(-jmax, jmax + 1)})

    @classmethod
    def from_array(cls, arr) -> SpectralPerturbation:
        """Build from a (2*jmax+1, kmax+1) array whose row 0 is j = -jmax."""
        arr = np.asarray(arr, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] % 2 != 1:
            raise ValueError("expected an array of shape (2*jmax+1, kmax+1)")
        jmax = arr.shape[0] // 2
        return cls(jmax, arr.shape[1] - 1, {j: arr[j + jmax].copy() for j in range(-jmax, jmax + 1)})

    @classmethod
    def unit(cls, j: int, k: int, jmax: int | None = None, kmax: int | None = None):
        jmax = abs(j) if jmax is None else jmax
        kmax = k if kmax is None else kmax
        out = cls.zeros(jmax, kmax)
        out.blocks[j][k] = 1.0
        return out

    def to_array(self) -> np.ndarray:
        return np.stack([self.blocks[j] for j in range(-self.jmax, self.jmax + 1)])

    def __getitem__(self, jk: tuple[int, int]) -> complex:
        j, k = jk
        if abs(j) > self.jmax or not 0 <= k <= self.kmax:
            return 0j
        return complex(self.blocks[j][k])

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.to_array()))


def _basis_matrix(j: int, kmax: int, r: np.ndarray) -> np.ndarray:
    """Rows k = 0..kmax of sqrt((|j|+2k+1)/pi) R^{|j|}_{|j|+2k}(r)."""
    return np.stack([math.sqrt((abs(j) + 2 * k + 1) / math.pi) * radial_eval(j, k, r)
                     for k in range(kmax + 1)])


def analyze(samples, grid: DiskGrid, jmax: int, kmax: int) -> SpectralPerturbation:
    """Zernike coefficients c_{j,k} = <eta, psi_{j,k}> from samples on `grid`.

    `samples` has shape (grid.n_r, grid.n_theta). The result is exact up to
    roundoff for eta in the span of the truncated basis.
    """
    samples = np.asarray(samples, dtype=complex)
    if samples.shape != (grid.n_r, grid.n_theta):
        raise ValueError(f"samples shape {samples.shape} does not match grid "
                         f"({grid.n_r}, {grid.n_theta})")
    degree = jmax + 2 * kmax
    if grid.n_r < degree + 1 or grid.n_theta < 2 * jmax + 2:
        raise ValueError(f"grid ({grid.n_r}, {grid.n_theta}) under-resolves degree {degree}"
                         f" (needs n_r >= {degree + 1}, n_theta >= {2 * jmax + 2})")
    out = SpectralPerturbation.zeros(jmax, kmax)
    for j in range(-jmax, jmax + 1):
        # angular projection at each radius
        phase = np.exp(-1j * j * grid.theta)
        ang = (samples @ phase) * grid.theta_weight
        out.blocks[j] = _basis_matrix(j, kmax, grid.r) @ (grid.weights * ang)
    return out


def synthesize(coeffs: SpectralPerturbation, r, theta) -> np.ndarray:
    """Evaluate sum_{j,k} c_{j,k} psi_{j,k} at points (r, theta) (broadcast)."""
    r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
    flat_r = r.ravel()
    flat_t = theta.ravel()
    out = np.zeros(flat_r.shape, dtype=complex)
    for j in range(-coeffs.jmax, coeffs.jmax + 1):
        c = coeffs.blocks[j]
        if not np.any(c):
            continue
        radial = c @ _basis_matrix(j, coeffs.kmax, flat_r)
        out += radial * np.exp(1j * j * flat_t)
    return out.reshape(r.shape)


def sample_on_grid(coeffs: SpectralPerturbation, grid: DiskGrid) -> np.ndarray:
    rr, tt = grid.mesh()
    return synthesize(coeffs, rr, tt)
