"""Linearized EIT forward map on the unit disk in Zernike/Fourier bases."""

from .frechet import NDPerturbation, TriangularBlock, apply, assemble_block, entry, entry_gamma, hs_norm
from .recon import ReconConfig, reconstruct, solve_block
from .zernike import DiskGrid, SpectralPerturbation, ZernikeIndex, analyze, basis_eval, disk_grid, radial_eval, synthesize

__version__ = "0.1.0"
