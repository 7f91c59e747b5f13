"""Assembly of the channel spectra into the full Schmidt decomposition.

With orbitals normalised to unit radial norm the decomposition reads

    Psi = sum_{m, s} kappa_{s,m} / (2 pi)^2 * chi_s(r1) chi_s(r2) / sqrt(r1 r2)
          * exp(i m (phi1 - phi2))

so the occupancy of the natural orbital pair ``(s, m)`` is
``lambda = (kappa / 2 pi)^2`` and ``sum lambda = <Psi|Psi>``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .angular import angular_nodes
from .errors import DomainError, NormDeficitWarning
from .geometry import PolarPoint, pair_radii
from .radial_solver import KAPPA_FLOOR, SchmidtChannel, extend_orbitals, interpolate_orbital

TWO_PI = 2.0 * math.pi


def occupancy(kappa):
    return (np.asarray(kappa, dtype=float) / TWO_PI) ** 2


@dataclass(frozen=True, eq=False)
class NaturalOrbital:
    """``v_{s,m}(r, phi) = chi_s^(|m|)(r) / sqrt(r) * exp(i m phi)``."""

    s: int
    m: int
    channel: SchmidtChannel

    @property
    def radial_part(self):
        return self.channel.orbitals[:, self.s]

    def evaluate(self, rho, phi):
        chi = interpolate_orbital(self.channel, self.s, rho)
        return chi / np.sqrt(rho) * np.exp(1j * self.m * np.asarray(phi))


def natural_orbitals(channels):
    out = []
    for ch in channels:
        for s in range(ch.s_max):
            out.append(NaturalOrbital(s, ch.m, ch))
            if ch.m:
                out.append(NaturalOrbital(s, -ch.m, ch))
    return out


def orbital_overlap(a: NaturalOrbital, b: NaturalOrbital) -> complex:
    """``int int r v_a^* v_b dr dphi``; the angular factor ``2 pi delta_mm'`` is applied exactly."""
    if a.m != b.m:
        return 0j
    if a.channel.grid is not b.channel.grid:
        raise ValueError("orbitals live on different grids")
    w = a.channel.grid.weights
    return complex(TWO_PI * float(np.sum(w * a.radial_part * b.radial_part)))


def overlap_matrix(orbitals):
    n = len(orbitals)
    g = np.zeros((n, n), dtype=complex)
    for i, a in enumerate(orbitals):
        for j, b in enumerate(orbitals):
            g[i, j] = orbital_overlap(a, b)
    return g


@dataclass
class EntanglementReport:
    occupancies: list
    total_norm: float
    von_neumann_entropy: float
    entropy_bits: float
    linear_entropy: float
    schmidt_number: float
    norm_deficit: float
    reconstruction_residual: Optional[float] = None
    warnings: list = field(default_factory=list)

    @property
    def lambdas(self):
        return np.array([lam for _, _, lam in self.occupancies])

    def to_dict(self):
        return {
            "total_norm": self.total_norm,
            "norm_deficit": self.norm_deficit,
            "von_neumann_entropy_nats": self.von_neumann_entropy,
            "von_neumann_entropy_bits": self.entropy_bits,
            "linear_entropy": self.linear_entropy,
            "schmidt_number": self.schmidt_number,
            "reconstruction_residual": self.reconstruction_residual,
            "warnings": list(self.warnings),
            "occupancies": [{"s": s, "m": m, "lambda": lam} for s, m, lam in self.occupancies],
        }


def entropies(lambdas):
    lam = np.asarray(lambdas, dtype=float)
    pos = lam[lam > 0]
    s_vn = float(-np.sum(pos * np.log(pos)))
    purity = float(np.sum(lam * lam))
    return {
        "von_neumann_entropy": max(s_vn, 0.0),
        "entropy_bits": max(s_vn, 0.0) / math.log(2.0),
        "linear_entropy": max(1.0 - purity, 0.0),
        "schmidt_number": 1.0 / purity if purity > 0 else math.inf,
    }


def assemble_spectrum(channels, norm_tolerance=1e-4) -> EntanglementReport:
    """Signed-m occupancy list, entropies and norm bookkeeping."""
    if not any(ch.m == 0 for ch in channels):
        raise ValueError("the m = 0 channel is required")
    rows = []
    for ch in channels:
        lam = occupancy(ch.kappas)
        for s, value in enumerate(lam):
            rows.append((s, ch.m, float(value)))
            if ch.m:
                rows.append((s, -ch.m, float(value)))
    rows.sort(key=lambda r: (-r[2], r[0], abs(r[1]), -r[1]))
    lams = np.array([r[2] for r in rows])
    total = float(np.sum(lams))
    ent = entropies(lams)
    deficit = 1.0 - total
    notes = []
    if abs(deficit) > norm_tolerance:
        w = NormDeficitWarning(deficit, norm_tolerance)
        warnings.warn(w, stacklevel=2)
        notes.append(str(w))
    return EntanglementReport(
        occupancies=rows, total_norm=total, norm_deficit=deficit, warnings=notes, **ent
    )


def _check_radius(r, rho_max):
    if not (0.0 < r <= rho_max):
        raise DomainError(f"radius {r!r} outside (0, {rho_max}]")


def reconstruct(channels, p1: PolarPoint, p2: PolarPoint, floor=KAPPA_FLOOR) -> float:
    """Truncated decomposition evaluated at one configuration.

    Symmetric in ``p1`` and ``p2`` bit for bit: every product is formed in an
    order-independent way.
    """
    rho_max = channels[0].grid.rho_max
    _check_radius(p1.radius, rho_max)
    _check_radius(p2.radius, rho_max)
    dphi = p1.angle - p2.angle
    total = 0.0
    for ch in channels:
        # each radius extended on its own so the result cannot depend on argument order
        c1, keep = extend_orbitals(ch, [p1.radius], floor)
        c2, _ = extend_orbitals(ch, [p2.radius], floor)
        radial = float(np.sum(ch.kappas[keep] * (c1[0] * c2[0])))
        total += ch.multiplicity * math.cos(ch.m * dphi) * radial
    return total / (TWO_PI**2 * math.sqrt(p1.radius * p2.radius))


def reconstruct_many(channels, r1, phi1, r2, phi2, floor=KAPPA_FLOOR):
    """Vectorised :func:`reconstruct` over arrays of configurations."""
    r1, r2 = np.asarray(r1, float), np.asarray(r2, float)
    dphi = np.asarray(phi1, float) - np.asarray(phi2, float)
    rho_max = channels[0].grid.rho_max
    if np.any(r1 <= 0) or np.any(r2 <= 0) or np.any(r1 > rho_max) or np.any(r2 > rho_max):
        raise DomainError(f"radii must lie in (0, {rho_max}]")
    total = np.zeros(np.broadcast(r1, r2, dphi).shape)
    for ch in channels:
        c1, keep = extend_orbitals(ch, r1.ravel(), floor)
        c2, _ = extend_orbitals(ch, r2.ravel(), floor)
        radial = (c1 * c2) @ ch.kappas[keep]
        total += ch.multiplicity * np.cos(ch.m * dphi) * radial.reshape(total.shape)
    return total / (TWO_PI**2 * np.sqrt(r1 * r2))


def truncate(channels, m_max=None, s_max=None):
    """Drop channels above ``m_max`` and orbitals above ``s_max`` (views, no copy of kernels)."""
    out = []
    for ch in channels:
        if m_max is not None and ch.m > m_max:
            continue
        k = ch.s_max if s_max is None else min(s_max, ch.s_max)
        out.append(SchmidtChannel(ch.m, ch.kappas[:k], ch.orbitals[:, :k], ch.grid, ch.kernel))
    return out


def reconstruction_residual(channels, state, n_phi=None):
    """Relative L2 error of the truncated decomposition on the quadrature grid.

    The error is integrated with the full 4D measure over the radial nodes and
    a uniform grid in the angle difference; the stored orbital samples are used
    directly so discrete orthogonality makes the residual monotone in the
    truncation.
    """
    grid = channels[0].grid
    m_top = max(ch.m for ch in channels)
    if n_phi is None:
        n_phi = max(256, 4 * m_top + 16)
    phi = angular_nodes(n_phi)
    cos_phi = np.cos(phi)
    cos_m = {ch.m: np.cos(ch.m * phi) for ch in channels}
    r, w = grid.nodes, grid.weights
    err2 = ref2 = 0.0
    dphi_w = TWO_PI * TWO_PI / n_phi
    for i in range(grid.n):
        rho, varrho = pair_radii(r[i], r[:, None], cos_phi[None, :])
        exact = np.asarray(state.evaluate(rho, varrho), dtype=float)
        approx = np.zeros_like(exact)
        for ch in channels:
            radial = (ch.orbitals[i] * ch.kappas) @ ch.orbitals.T  # over j
            approx += ch.multiplicity * radial[:, None] * cos_m[ch.m][None, :]
        approx /= TWO_PI**2 * np.sqrt(r[i] * r)[:, None]
        meas = (w[i] * r[i] * w * r)[:, None] * dphi_w
        err2 += float(np.sum(meas * (exact - approx) ** 2))
        ref2 += float(np.sum(meas * exact**2))
    return math.sqrt(err2 / ref2)


def sample_residual(channels, state, n_pairs=100, r_max=None, seed=0):
    """Relative L2 error of the reconstruction at random off-grid configurations."""
    rng = np.random.default_rng(seed)
    grid = channels[0].grid
    r_max = r_max or grid.rho_max
    r1 = rng.uniform(0.05, r_max, n_pairs)
    r2 = rng.uniform(0.05, r_max, n_pairs)
    p1 = rng.uniform(0, TWO_PI, n_pairs)
    p2 = rng.uniform(0, TWO_PI, n_pairs)
    approx = reconstruct_many(channels, r1, p1, r2, p2)
    rho, varrho = pair_radii(r1, r2, np.cos(p2 - p1))
    exact = np.asarray(state.evaluate(rho, varrho), dtype=float)
    return float(np.linalg.norm(approx - exact) / np.linalg.norm(exact))
