"""Single-particle polar coordinates and the relative / centre-of-mass radii."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PolarPoint:
    radius: float
    angle: float = 0.0

    def __post_init__(self):
        if not (self.radius >= 0.0) or not math.isfinite(self.radius):
            raise ValueError(f"radius must be finite and nonnegative, got {self.radius!r}")
        if not math.isfinite(self.angle):
            raise ValueError(f"angle must be finite, got {self.angle!r}")


@dataclass(frozen=True)
class PairGeometry:
    """Relative radius ``rho = |r2 - r1|`` and centre-of-mass radius ``varrho = |r1 + r2| / 2``."""

    rho: float
    varrho: float


def pair_radii(r1, r2, cos_dphi):
    """Vectorised law of cosines.

    Parameters
    ----------
    r1, r2 : array_like
        Single-particle radii.
    cos_dphi : array_like
        Cosine of the angle between the two position vectors.

    Returns
    -------
    rho, varrho : ndarray
        Relative and centre-of-mass radii, broadcast against each other.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    sq = r1 * r1 + r2 * r2
    cross = 2.0 * r1 * r2 * np.asarray(cos_dphi, dtype=float)
    # clamp rounding below zero at coincident / antipodal points
    rho = np.sqrt(np.maximum(sq - cross, 0.0))
    varrho = 0.5 * np.sqrt(np.maximum(sq + cross, 0.0))
    return rho, varrho


def pair_geometry(p1: PolarPoint, p2: PolarPoint) -> PairGeometry:
    # cos of the difference only: keeps the result invariant under common rotations
    c = math.cos(p2.angle - p1.angle)
    r1, r2 = p1.radius, p2.radius
    sq = r1 * r1 + r2 * r2
    cross = 2.0 * r1 * r2 * c
    return PairGeometry(
        rho=math.sqrt(max(sq - cross, 0.0)),
        varrho=0.5 * math.sqrt(max(sq + cross, 0.0)),
    )
