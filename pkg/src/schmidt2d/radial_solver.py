"""Nystrom solution of the radial eigenproblem ``int A_m(r1, r2) chi(r2) dr2 = kappa chi(r1)``.

Orbitals are normalised with ``int chi_s chi_s' dr = delta_ss'`` (unit
constant), so every measure factor ends up in the coefficients ``kappa``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import AngularKernel, RadialGrid
from .errors import DomainError, KernelAsymmetryError, OrbitalExtensionError, SolverError

KAPPA_FLOOR = 1e-12


def eigen_decompose_symmetric(matrix, sym_tol=1e-10):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric matrix.

    Backed by LAPACK ``syevd`` through :func:`numpy.linalg.eigh`, which is
    deterministic for identical input.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asym > sym_tol * scale:
        raise KernelAsymmetryError(f"matrix asymmetry {asym:.3e} exceeds {sym_tol:.1e}")
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"symmetric eigensolver did not converge (n={a.shape[0]}): {exc}") from exc
    return vals, vecs


@dataclass(frozen=True, eq=False)
class SchmidtChannel:
    """Eigenpairs of one angular channel.

    ``orbitals[:, s]`` holds ``chi_s`` at the grid nodes; ``kappas`` are sorted
    by decreasing magnitude and keep their sign.
    """

    m: int
    kappas: np.ndarray
    orbitals: np.ndarray
    grid: RadialGrid
    kernel: AngularKernel

    @property
    def multiplicity(self):
        return 1 if self.m == 0 else 2

    @property
    def s_max(self):
        return self.kappas.size


def _fix_signs(vecs):
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def solve_channel(kernel: AngularKernel, s_max: int) -> SchmidtChannel:
    grid = kernel.grid
    n = grid.n
    if not 1 <= s_max <= n:
        raise ValueError(f"s_max must lie in [1, {n}], got {s_max}")
    sw = np.sqrt(grid.weights)
    m_sym = sw[:, None] * kernel.matrix * sw[None, :]
    vals, vecs = eigen_decompose_symmetric(m_sym)
    # stable sort keeps the ordering deterministic for exact ties
    order = np.argsort(-np.abs(vals), kind="stable")[:s_max]
    kappas = vals[order]
    chi = _fix_signs(vecs[:, order] / sw[:, None])
    kappas.setflags(write=False)
    chi.setflags(write=False)
    return SchmidtChannel(kernel.m, kappas, chi, grid, kernel)


def solve_all(kernels, s_max):
    return [solve_channel(k, min(s_max, k.grid.n)) for k in kernels]


def interpolate_orbital(channel: SchmidtChannel, s: int, rho, floor=KAPPA_FLOOR):
    """Nystrom extension ``chi(r) = (1/kappa) sum_j w_j A_m(r, node_j) chi(node_j)``."""
    kappa = channel.kappas[s]
    if abs(kappa) < floor:
        raise OrbitalExtensionError(
            f"null-space orbital not extendable (m={channel.m}, s={s}, kappa={kappa:.3e})"
        )
    r = np.asarray(rho, dtype=float)
    if np.any(r <= 0) or np.any(r > channel.grid.rho_max):
        raise DomainError(f"rho must lie in (0, {channel.grid.rho_max}]")
    if channel.kernel.evaluator is None:
        raise OrbitalExtensionError("kernel carries no off-grid evaluator")
    flat = r.reshape(-1)
    rows = channel.kernel.evaluator(flat, channel.grid.nodes)
    vals = rows @ (channel.grid.weights * channel.orbitals[:, s]) / kappa
    return vals.reshape(r.shape) if r.ndim else float(vals[0])


def extend_orbitals(channel: SchmidtChannel, rho, floor=KAPPA_FLOOR):
    """All extendable orbitals at once: array of shape ``(len(rho), n_kept)``.

    Returns the extended values and the indices ``s`` they correspond to.
    """
    keep = np.flatnonzero(np.abs(channel.kappas) >= floor)
    r = np.atleast_1d(np.asarray(rho, dtype=float))
    if r.size == 0 or keep.size == 0:
        return np.zeros((r.size, keep.size)), keep
    if np.any(r <= 0) or np.any(r > channel.grid.rho_max):
        raise DomainError(f"rho must lie in (0, {channel.grid.rho_max}]")
    rows = channel.kernel.evaluator(r, channel.grid.nodes)
    coeff = channel.grid.weights[:, None] * channel.orbitals[:, keep] / channel.kappas[keep]
    return rows @ coeff, keep


def orbital_gram(channel: SchmidtChannel):
    w = channel.grid.weights
    return channel.orbitals.T @ (w[:, None] * channel.orbitals)
