"""Schmidt decomposition of rotationally invariant two-particle states in a 2D trap."""

__version__ = "0.1.0"

from .analysis import (EntanglementReport, NaturalOrbital, assemble_spectrum,
                       natural_orbitals, orbital_overlap, reconstruct, reconstruction_residual)
from .angular import (BACKEND, AngularKernel, RadialGrid, angular_kernel, angular_kernel_all,
                      build_radial_grid)
from .geometry import PairGeometry, PolarPoint, pair_geometry
from .models import GaussianPairState, TabulatedPairState, eval_state, normalize_state
from .oracle import oracle_spectrum
from .radial_solver import (SchmidtChannel, eigen_decompose_symmetric, interpolate_orbital,
                            solve_channel)

__all__ = [
    "AngularKernel", "BACKEND", "EntanglementReport", "GaussianPairState", "NaturalOrbital",
    "PairGeometry", "PolarPoint", "RadialGrid", "SchmidtChannel", "TabulatedPairState",
    "angular_kernel", "angular_kernel_all", "assemble_spectrum", "build_radial_grid",
    "eigen_decompose_symmetric", "eval_state", "interpolate_orbital", "natural_orbitals",
    "normalize_state", "oracle_spectrum", "orbital_overlap", "pair_geometry", "reconstruct",
    "reconstruction_residual", "solve_channel",
]
