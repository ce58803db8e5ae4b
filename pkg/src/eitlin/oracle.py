"""Brute-force check of the closed-form coefficients.

At unit conductivity the Neumann problem with boundary current f_m has the
harmonic solution u_m = r^{|m|} exp(i m theta) / (|m| sqrt(2 pi)). The
coefficient <(F psi) f_m, f_n> equals -int_D psi grad u_m . conj(grad u_n),
which is integrated here on a polar tensor grid, independently of the
closed form in :mod:`eitlin.frechet`. The Zernike factor is evaluated via
the Jacobi three-term recurrence, R^{|j|}_{|j|+2k}(r) =
(-1)^k r^{|j|} P_k^{(|j|,0)}(1 - 2 r^2), which avoids the cancellation of
the monomial sum and keeps the oracle off the code path of
:mod:`eitlin.zernike`.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import eval_jacobi

from .zernike import DiskGrid, disk_grid

__all__ = ["harmonic_gradient", "zernike_jacobi", "oracle_grid", "entry_quadrature",
           "max_discrepancy"]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def harmonic_gradient(m: int, r, theta) -> tuple:
    """Polar gradient components (d_r u_m, r^{-1} d_theta u_m) of the harmonic mode u_m."""
    if m == 0:
        raise ValueError("mode m = 0 is not mean-free")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r > 1):
        raise ValueError("r must lie in [0, 1]")
    ma = abs(m)
    radial = r ** (ma - 1) * np.exp(1j * m * np.asarray(theta, float)) / _SQRT_2PI
    tangential = 1j * np.sign(m) * radial
    if radial.ndim == 0:
        return complex(radial), complex(tangential)
    return radial, tangential


def zernike_jacobi(j: int, k: int, r, theta):
    """psi_{j,k} through the Jacobi-polynomial form of the radial factor."""
    ja = abs(j)
    r = np.asarray(r, dtype=float)
    radial = (-1) ** k * r ** ja * eval_jacobi(k, ja, 0, 1.0 - 2.0 * r * r)
    return math.sqrt((ja + 2 * k + 1) / math.pi) * radial * np.exp(1j * j * np.asarray(theta, float))


def oracle_grid(j: int, k: int, m: int, n: int) -> DiskGrid:
    """Smallest grid (plus a margin) that integrates the entry integrand exactly."""
    degree = abs(j) + 2 * k + abs(m) + abs(n)
    n_r = math.ceil((degree + 2) / 2) + 4
    n_theta = 2 * (abs(j) + abs(m) + abs(n)) + 2
    return disk_grid(n_r, n_theta)


def entry_quadrature(j: int, k: int, m: int, n: int, grid: DiskGrid | None = None) -> complex:
    """-int_D psi_{j,k} grad u_m . conj(grad u_n) dV by tensor quadrature."""
    if grid is None:
        grid = oracle_grid(j, k, m, n)
    degree = abs(j) + 2 * k + abs(m) + abs(n)
    # radial integrand is a polynomial of degree <= degree/2 in s = r^2
    if grid.s_exactness < degree // 2 + 1 or grid.max_frequency < abs(j) + abs(m) + abs(n):
        raise ValueError(f"grid ({grid.n_r}, {grid.n_theta}) under-resolves the "
                         f"integrand for (j,k,m,n)=({j},{k},{m},{n})")
    rr, tt = grid.mesh()
    psi = zernike_jacobi(j, k, rr, tt)
    gr_m, gt_m = harmonic_gradient(m, rr, tt)
    gr_n, gt_n = harmonic_gradient(n, rr, tt)
    dot = gr_m * np.conj(gr_n) + gt_m * np.conj(gt_n)
    integrand = psi * dot
    # rows: radial nodes; angular sum first, then radial
    ang = integrand.sum(axis=1) * grid.theta_weight
    return complex(-(grid.weights @ ang))


def max_discrepancy(jmax: int = 6, kmax: int = 6, mmax: int = 10) -> dict:
    """Compare quadrature against the closed form over an index box.

    Returns the maximum absolute discrepancy overall, the maximum over the
    structurally zero entries, and the worst index tuple.
    """
    from .frechet import entry

    worst = 0.0
    worst_zero = 0.0
    where = None
    count = 0
    modes = [m for m in range(-mmax, mmax + 1) if m != 0]
    for j in range(-jmax, jmax + 1):
        for k in range(kmax + 1):
            for m in modes:
                for n in modes:
                    exact = entry(j, k, m, n)
                    diff = abs(entry_quadrature(j, k, m, n) - exact)
                    count += 1
                    if exact == 0.0:
                        worst_zero = max(worst_zero, diff)
                    if diff > worst:
                        worst, where = diff, (j, k, m, n)
    return {"max_abs": worst, "max_abs_zero": worst_zero, "worst": where, "count": count,
            "box": {"jmax": jmax, "kmax": kmax, "mmax": mmax}}
