"""Radial quadrature grids and the angular-channel kernels ``A_m(r1, r2)``.

``A_m(r1, r2) = sqrt(r1 r2) * int int Psi cos(m (phi2 - phi1)) dphi1 dphi2``.
Because ``Psi`` depends on the angles only through ``phi2 - phi1`` the double
integral collapses to ``2 pi`` times a single periodic integral, evaluated with
the trapezoid rule on a uniform grid (a discrete cosine projection).

The Gaussian projection is the hot loop; it runs in the compiled
``_kernels`` extension when available and in numpy otherwise. Set
``SCHMIDT2D_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import _kernels_py
from .errors import ConfigurationError, StateEvaluationError
from .geometry import pair_radii
from .models import GaussianPairState

try:
    if os.environ.get("SCHMIDT2D_BACKEND", "").lower() == "python":
        raise ImportError("python backend requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

RULES = ("gauss-legendre", "midpoint")
_CHUNK = 2_000_000  # Psi samples per vectorised block in the generic path


@dataclass(frozen=True, eq=False)
class RadialGrid:
    nodes: np.ndarray
    weights: np.ndarray
    rho_max: float
    rule: str = "gauss-legendre"

    @property
    def n(self):
        return self.nodes.size


def build_radial_grid(n: int, rho_max: float, rule: str = "gauss-legendre") -> RadialGrid:
    """Quadrature nodes strictly inside ``(0, rho_max)``.

    ``gauss-legendre`` maps the Legendre rule from [-1, 1]; ``midpoint`` is the
    composite open rule with nodes at cell centres.
    """
    problems = []
    if not isinstance(n, (int, np.integer)) or n < 8:
        problems.append(f"n: need an integer >= 8, got {n!r}")
    if not (isinstance(rho_max, (int, float)) and rho_max > 0 and math.isfinite(rho_max)):
        problems.append(f"rho_max: need a positive finite value, got {rho_max!r}")
    if rule not in RULES:
        problems.append(f"rule: unknown quadrature rule {rule!r} (choose from {RULES})")
    if problems:
        raise ConfigurationError("; ".join(problems), problems)

    rho_max = float(rho_max)
    if rule == "gauss-legendre":
        x, w = leggauss(int(n))
        nodes = 0.5 * rho_max * (x + 1.0)
        weights = 0.5 * rho_max * w
    else:
        h = rho_max / n
        nodes = h * (np.arange(n) + 0.5)
        weights = np.full(n, h)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return RadialGrid(nodes, weights, rho_max, rule)


def default_n_phi(m_max: int) -> int:
    return max(256, 4 * m_max + 16)


def _check_n_phi(n_phi, m_max):
    if not isinstance(n_phi, (int, np.integer)) or n_phi % 2 or n_phi < 4 * m_max + 16:
        raise ConfigurationError(
            f"n_phi must be an even integer >= 4*m_max + 16 = {4 * m_max + 16}, got {n_phi!r}"
        )


def angular_nodes(n_phi):
    return 2.0 * np.pi * np.arange(n_phi) / n_phi


def cosine_table(ms, n_phi):
    phi = angular_nodes(n_phi)
    return np.ascontiguousarray(np.cos(np.outer(np.asarray(ms, dtype=float), phi)))


@dataclass(frozen=True, eq=False)
class AngularKernel:
    """Channel kernel sampled on ``grid``: ``matrix[i, j] = A_m(node_i, node_j)``.

    ``evaluator(ra, rb)`` returns the same kernel on arbitrary radii and is
    used for Nystrom extension off the grid.
    """

    m: int
    matrix: np.ndarray
    grid: RadialGrid
    n_phi: Optional[int] = None
    evaluator: Optional[Callable] = field(default=None, repr=False)

    @property
    def multiplicity(self):
        return 1 if self.m == 0 else 2

    @classmethod
    def from_function(cls, func, grid, m=0):
        """Wrap an analytic kernel ``func(r1, r2)`` (broadcasting) as a channel."""

        def evaluator(ra, rb):
            return func(np.asarray(ra, float)[:, None], np.asarray(rb, float)[None, :])

        matrix = evaluator(grid.nodes, grid.nodes)
        return cls(m, 0.5 * (matrix + matrix.T), grid, None, evaluator)


def _raise_first_bad(state, ra, rb, cos_phi):
    for r1 in ra:
        rho, varrho = pair_radii(r1, np.asarray(rb)[:, None], cos_phi[None, :])
        vals = np.asarray(state.evaluate(rho, varrho))
        bad = ~np.isfinite(vals)
        if np.any(bad):
            idx = np.argwhere(bad)[0]
            raise StateEvaluationError(float(rho[tuple(idx)]), float(varrho[tuple(idx)]),
                                       float(vals[tuple(idx)]))
    raise StateEvaluationError(float("nan"), float("nan"), float("nan"))


def _generic_projection(state, ra, rb, cos_phi, table, symmetric):
    n_m, n_phi = table.shape
    out = np.zeros((n_m, ra.size, rb.size))
    for i, r1 in enumerate(ra):
        j0 = i if symmetric else 0
        rows = rb[j0:]
        step = max(1, _CHUNK // n_phi)
        for s in range(0, rows.size, step):
            r2 = rows[s:s + step, None]
            rho, varrho = pair_radii(r1, r2, cos_phi[None, :])
            vals = np.asarray(state.evaluate(rho, varrho), dtype=float)
            if not np.all(np.isfinite(vals)):
                bad = np.argwhere(~np.isfinite(vals))[0]
                raise StateEvaluationError(float(rho[tuple(bad)]), float(varrho[tuple(bad)]),
                                           float(vals[tuple(bad)]))
            out[:, i, j0 + s:j0 + s + r2.shape[0]] = (vals @ table.T).T
    if symmetric:
        iu = np.triu_indices(ra.size, 1)
        out[:, iu[1], iu[0]] = out[:, iu[0], iu[1]]
    return out


def kernel_block(state, ra, rb, ms, n_phi, symmetric=False, backend=None):
    """``A_m(ra_i, rb_j)`` for every ``m`` in ``ms``; shape ``(len(ms), len(ra), len(rb))``.

    With ``symmetric=True`` (``ra`` is ``rb``) only the upper triangle is
    evaluated: ``N (N + 1) / 2 * n_phi`` state evaluations.
    """
    ra = np.ascontiguousarray(ra, dtype=float)
    rb = np.ascontiguousarray(rb, dtype=float)
    if symmetric and (ra.shape != rb.shape or np.any(ra != rb)):
        raise ValueError("symmetric block needs identical radii")
    cos_phi = np.ascontiguousarray(np.cos(angular_nodes(n_phi)))
    table = cosine_table(ms, n_phi)

    if isinstance(state, GaussianPairState):
        impl = _BACKENDS[backend or BACKEND]
        sums = impl.gaussian_projection(
            ra, rb, 1.0 / (2.0 * state.sigma_r**2), 1.0 / (2.0 * state.sigma_c**2),
            float(state.norm_constant), cos_phi, table, bool(symmetric),
        )
        sums = np.asarray(sums)
        if not np.all(np.isfinite(sums)):
            _raise_first_bad(state, ra, rb, cos_phi)
    else:
        sums = _generic_projection(state, ra, rb, cos_phi, table, symmetric)

    # 2 pi from the collapsed outer angle, 2 pi / n_phi trapezoid weight
    prefactor = (2.0 * np.pi) * (2.0 * np.pi / n_phi) * np.sqrt(np.outer(ra, rb))
    return sums * prefactor[None, :, :]


def _make_evaluator(state, m, n_phi):
    def evaluator(ra, rb):
        return kernel_block(state, np.atleast_1d(ra), np.atleast_1d(rb), [m], n_phi)[0]

    return evaluator


def angular_kernel_all(state, grid: RadialGrid, m_max: int, n_phi: Optional[int] = None,
                       backend: Optional[str] = None):
    """Kernels for ``m = 0 .. m_max`` from one pass over the angular samples."""
    if not isinstance(m_max, (int, np.integer)) or m_max < 0:
        raise ConfigurationError(f"m_max must be a nonnegative integer, got {m_max!r}")
    if n_phi is None:
        n_phi = default_n_phi(m_max)
    _check_n_phi(n_phi, m_max)
    ms = list(range(m_max + 1))
    block = kernel_block(state, grid.nodes, grid.nodes, ms, n_phi, symmetric=True,
                         backend=backend)
    kernels = []
    for m in ms:
        a = block[m]
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        kernels.append(AngularKernel(m, a, grid, n_phi, _make_evaluator(state, m, n_phi)))
    return kernels


def angular_kernel(state, grid: RadialGrid, m: int, n_phi: Optional[int] = None,
                   backend: Optional[str] = None) -> AngularKernel:
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise ConfigurationError(f"m must be a nonnegative integer, got {m!r}")
    if n_phi is None:
        n_phi = default_n_phi(m)
    _check_n_phi(n_phi, m)
    a = kernel_block(state, grid.nodes, grid.nodes, [m], n_phi, symmetric=True,
                     backend=backend)[0]
    a = 0.5 * (a + a.T)
    a.setflags(write=False)
    return AngularKernel(m, a, grid, n_phi, _make_evaluator(state, m, n_phi))
