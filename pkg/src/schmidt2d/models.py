"""Two-particle states ``Psi(rho, varrho) = norm * psi_rel(rho) * psi_cm(varrho)``.

Any object with an ``evaluate(rho, varrho)`` method returning real amplitudes
can be fed to the kernel builders; the classes here are the product-form
built-ins (relative and centre-of-mass motion with zero angular momentum).
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigurationError, DegenerateStateError
from .geometry import PairGeometry


@dataclass(frozen=True)
class GaussianPairState:
    """Gaussian in both the relative and the centre-of-mass radius.

    This is the exact stationary ground state of two particles in an
    isotropic trap with a harmonic interaction. ``sigma_r = sqrt(2)``,
    ``sigma_c = 1/sqrt(2)`` reproduces the noninteracting product
    ``exp(-(r1^2 + r2^2) / 2)`` in trap units.
    """

    sigma_r: float
    sigma_c: float
    norm_constant: float = 1.0

    def __post_init__(self):
        if not (self.sigma_r > 0 and self.sigma_c > 0):
            raise ConfigurationError(
                f"Gaussian widths must be positive (sigma_r={self.sigma_r}, sigma_c={self.sigma_c})"
            )

    def rel(self, rho):
        rho = np.asarray(rho, dtype=float)
        return np.exp(-rho * rho / (2.0 * self.sigma_r**2))

    def cm(self, varrho):
        varrho = np.asarray(varrho, dtype=float)
        return np.exp(-varrho * varrho / (2.0 * self.sigma_c**2))

    def evaluate(self, rho, varrho):
        return self.norm_constant * self.rel(rho) * self.cm(varrho)

    @property
    def alpha(self):
        """Coefficient of ``-(r1^2 + r2^2)`` in the exponent."""
        return 1.0 / (2.0 * self.sigma_r**2) + 1.0 / (8.0 * self.sigma_c**2)

    @property
    def beta(self):
        """Coefficient of ``r1 . r2`` in the exponent; zero for a product state."""
        return 1.0 / self.sigma_r**2 - 1.0 / (4.0 * self.sigma_c**2)

    def exact_norm_constant(self):
        return 1.0 / (math.pi * self.sigma_r * self.sigma_c)

    def schmidt_ratio(self):
        """Geometric ratio ``z`` of the occupancies ``(1 - z)^2 z^(2s + |m|)``.

        The Cartesian components factorise into two identical 1D kernels
        ``exp(-alpha (x1^2 + x2^2) + beta x1 x2)``; matching them to the
        Mehler kernel ``sum_n t^n h_n(x1) h_n(x2)`` gives
        ``beta / alpha = 4 t / (1 + t^2)`` and ``z = t^2``.
        """
        a, b = self.alpha, abs(self.beta)
        if b == 0.0:
            return 0.0
        t = b / (2.0 * a + math.sqrt(4.0 * a * a - b * b))
        return t * t


def _read_two_columns(samples, label):
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 4:
        raise ConfigurationError(f"{label}: need at least 4 (abscissa, value) pairs")
    x, y = arr[:, 0], arr[:, 1]
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{label}: non-finite sample")
    if x[0] < 0 or np.any(np.diff(x) <= 0):
        raise ConfigurationError(f"{label}: abscissae must be nonnegative and strictly increasing")
    return x, y


class _RadialTable:
    def __init__(self, x, y, order):
        self.x, self.y = x, y
        self.lo, self.hi = x[0], x[-1]
        if order == 3:
            self._f = CubicSpline(x, y)
        elif order == 1:
            self._f = lambda q: np.interp(q, x, y)
        else:
            raise ConfigurationError(f"interpolation_order must be 1 or 3, got {order}")

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        out = np.asarray(self._f(np.clip(q, self.lo, self.hi)), dtype=float)
        # below the first node the value is pinned to the first sample (via clip)
        outside = q > self.hi
        if np.any(outside):
            out = np.where(outside, 0.0, out)
        return out, bool(np.any(outside))


@dataclass
class TabulatedPairState:
    """Product state built from sampled radial functions.

    Queries beyond the last tabulated abscissa evaluate to zero and set
    ``truncated_tail``.
    """

    rel_samples: np.ndarray
    cm_samples: np.ndarray
    interpolation_order: int = 3
    norm_constant: float = 1.0
    truncated_tail: bool = field(default=False, compare=False)

    def __post_init__(self):
        self._rel = _RadialTable(*_read_two_columns(self.rel_samples, "rel_samples"),
                                 self.interpolation_order)
        self._cm = _RadialTable(*_read_two_columns(self.cm_samples, "cm_samples"),
                                self.interpolation_order)

    @classmethod
    def from_functions(cls, rel, cm, rel_max, cm_max, n_samples=400, **kwargs):
        """Tabulate two radial callables on uniform grids starting at zero."""
        xr = np.linspace(0.0, rel_max, n_samples)
        xc = np.linspace(0.0, cm_max, n_samples)
        return cls(np.column_stack([xr, rel(xr)]), np.column_stack([xc, cm(xc)]), **kwargs)

    @property
    def rel_range(self):
        return self._rel.lo, self._rel.hi

    @property
    def cm_range(self):
        return self._cm.lo, self._cm.hi

    def rel(self, rho):
        out, tail = self._rel(rho)
        self.truncated_tail |= tail
        return out

    def cm(self, varrho):
        out, tail = self._cm(varrho)
        self.truncated_tail |= tail
        return out

    def evaluate(self, rho, varrho):
        return self.norm_constant * self.rel(rho) * self.cm(varrho)


def eval_state(state, g: PairGeometry) -> float:
    return float(state.evaluate(g.rho, g.varrho))


def normalize_state(state, grid):
    """Return a copy of ``state`` whose 2D norm is one.

    The 4D norm integral factorises into one integral over the relative radius
    and one over the centre-of-mass radius, each carrying a ``2 pi r`` measure.
    The relative radius can reach ``2 rho_max`` on the grid's domain, so its
    integral uses the grid rescaled to ``(0, 2 rho_max]``.
    """
    rel_nodes, rel_w = 2.0 * grid.nodes, 2.0 * grid.weights
    cm_nodes, cm_w = grid.nodes, grid.weights
    rel_int = 2.0 * math.pi * np.sum(rel_w * rel_nodes * state.rel(rel_nodes) ** 2)
    cm_int = 2.0 * math.pi * np.sum(cm_w * cm_nodes * state.cm(cm_nodes) ** 2)
    norm_sq = rel_int * cm_int
    if not np.isfinite(norm_sq) or norm_sq <= 1e-300:
        raise DegenerateStateError(f"state norm is numerically zero ({norm_sq!r})")
    return dataclasses.replace(state, norm_constant=1.0 / math.sqrt(norm_sq))


def load_table(path):
    """Read a two-column (abscissa, value) text file; ``#`` starts a comment."""
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise ConfigurationError(f"{path}: expected two columns, found {data.shape[1]}")
    return data


def write_table(path, x, y, comment=None):
    header = comment or ""
    np.savetxt(path, np.column_stack([x, y]), fmt="%.17e", header=header, comments="# ")


BUILTIN_GAUSSIANS = {
    "noninteracting": (math.sqrt(2.0), 1.0 / math.sqrt(2.0)),
    "harmonic_weak": (2.0, 1.0 / math.sqrt(2.0)),
    "harmonic_attractive": (1.0, 1.0),
}
