"""Eigen-scaled boundary spaces on the disk and the finite-rank embedding estimate.

On the unit disk the ND map at unit conductivity is diagonal in the Fourier
basis, Lambda(1) f_m = f_m / |m|. Ordering the eigenpairs by decreasing
eigenvalue (ties: |m| ascending, positive m first) gives the sequence
lambda_1 >= lambda_2 >= ... used to weight the H^eps inner products.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = ["EigenScale", "EmbeddingCheck", "nd_eigenvalues", "h_eps_inner", "scaled_basis",
           "embedding_error_check", "embedding_sweep"]


@dataclass(frozen=True)
class EigenScale:
    eigenvalues: np.ndarray
    modes: np.ndarray

    def __len__(self):
        return self.eigenvalues.size


def nd_eigenvalues(N: int) -> EigenScale:
    if N < 1:
        raise ValueError("N must be >= 1")
    i = np.arange(N)
    modes = (i // 2 + 1) * np.where(i % 2 == 0, 1, -1)
    return EigenScale(1.0 / np.abs(modes), modes)


def h_eps_inner(g, h, eps: float, scale: EigenScale | None = None) -> complex:
    """sum_i lambda_i^{-2 eps} g_i conj(h_i) for coefficients in the eigenbasis."""
    g = np.asarray(g)
    h = np.asarray(h)
    if g.shape != h.shape or g.ndim != 1:
        raise ValueError(f"coefficient vectors must have equal 1-d shapes, got {g.shape}, {h.shape}")
    if not -0.5 <= eps <= 0.5:
        raise ValueError("eps must lie in [-1/2, 1/2]")
    lam = (scale or nd_eigenvalues(g.size)).eigenvalues[: g.size]
    return complex(np.sum(lam ** (-2.0 * eps) * g * np.conj(h)))


def scaled_basis(i: int, N: int, eps: float) -> np.ndarray:
    """Coefficients of phi_i^eps = lambda_i^eps phi_i (0-based i) in the phi basis."""
    out = np.zeros(N)
    out[i] = nd_eigenvalues(N).eigenvalues[i] ** eps
    return out


class EmbeddingCheck(NamedTuple):
    error: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.error <= self.bound


def embedding_error_check(T, M: int, eps: float) -> EmbeddingCheck:
    """Truncation error of the rank-M^2 embedding applied to T and its bound.

    error^2 = sum over (i, j) outside {1..M}^2 of (lambda_i lambda_j)^{2 eps} |T_ij|^2
    bound^2 = (lambda_1 lambda_{M+1})^{2 eps} ||T||_HS^2
    """
    T = np.asarray(T)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError("T must be a square matrix")
    N = T.shape[0]
    if not 0 <= M < N:
        raise ValueError(f"need 0 <= M < N, got M={M}, N={N}")
    lam = nd_eigenvalues(N).eigenvalues
    weight = np.outer(lam, lam) ** (2.0 * eps)
    mass = np.abs(T) ** 2
    outside = np.ones((N, N), dtype=bool)
    outside[:M, :M] = False
    error = np.sqrt(np.sum(weight[outside] * mass[outside]))
    bound = np.sqrt((lam[0] * lam[M]) ** (2.0 * eps) * np.sum(mass))
    return EmbeddingCheck(float(error), float(bound))


def embedding_sweep(N: int = 50, Ms=None, eps_values=(0.1, 0.25, 0.5), trials: int = 10_000,
                    seed: int = 0) -> dict:
    """Random complex Gaussian T; returns the worst error/bound ratio over all cases."""
    rng = np.random.default_rng(seed)
    Ms = np.arange(1, N) if Ms is None else np.asarray(list(Ms), dtype=int)
    if Ms.size and (Ms.min() < 0 or Ms.max() >= N):
        raise ValueError(f"M values must lie in [0, {N - 1}]")
    lam = nd_eigenvalues(N).eigenvalues
    worst = {"ratio": 0.0}
    violations = 0
    cases = 0
    for t in range(trials):
        T = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
        mass = np.abs(T) ** 2
        total = mass.sum()
        for eps in eps_values:
            wm = np.outer(lam, lam) ** (2.0 * eps) * mass
            # weighted mass of the leading M x M block for every M at once
            lead = np.concatenate([[0.0], np.diagonal(np.cumsum(np.cumsum(wm, axis=0), axis=1))])
            err = np.sqrt(np.maximum(wm.sum() - lead[Ms], 0.0))
            bnd = np.sqrt((lam[0] * lam[Ms]) ** (2.0 * eps) * total)
            ratio = err / bnd
            cases += Ms.size
            violations += int(np.sum(err > bnd))
            i = int(np.argmax(ratio))
            if ratio[i] > worst["ratio"]:
                worst = {"ratio": float(ratio[i]), "trial": t, "M": int(Ms[i]), "eps": eps}
    return {"N": N, "trials": trials, "seed": seed, "cases": cases,
            "violations": violations, "worst": worst}
