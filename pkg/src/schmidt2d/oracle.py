"""Brute-force Schmidt spectrum from a Cartesian bipartite SVD.

No angular or radial machinery: Psi is sampled on a uniform 2D grid per
particle and the singular values of the resulting matrix give the
occupancies. Used as an independent cross-check of the channel solver.
"""
from __future__ import annotations

import numpy as np

from .errors import OracleError
from .geometry import pair_radii

MAX_CELLS = 2500


def bipartite_matrix(state, n_cart, half_width):
    """``Psi[(x1, y1), (x2, y2)] * cell_area`` on a cell-centred grid."""
    h = 2.0 * half_width / n_cart
    axis = -half_width + h * (np.arange(n_cart) + 0.5)
    x, y = np.meshgrid(axis, axis, indexing="ij")
    x, y = x.ravel(), y.ravel()
    r = np.hypot(x, y)
    # cos of the angle between the position vectors, 1 at the origin by convention
    dot = x[:, None] * x[None, :] + y[:, None] * y[None, :]
    rr = r[:, None] * r[None, :]
    cos = np.divide(dot, rr, out=np.ones_like(dot), where=rr > 0)
    rho, varrho = pair_radii(r[:, None], r[None, :], cos)
    return np.asarray(state.evaluate(rho, varrho), dtype=float) * h * h


def oracle_spectrum(state, n_cart=40, half_width=6.0, k=10):
    """Top ``k`` occupancies (normalised to sum one over all singular values)."""
    if n_cart < 2 or half_width <= 0:
        raise OracleError("n_cart must be >= 2 and half_width positive")
    if n_cart * n_cart > MAX_CELLS:
        raise OracleError(
            f"bipartite matrix would be {n_cart**2} x {n_cart**2}; "
            f"use n_cart <= {int(MAX_CELLS**0.5)}"
        )
    mat = bipartite_matrix(state, n_cart, half_width)
    sigma = np.linalg.svd(mat, compute_uv=False)
    occ = sigma**2
    occ /= occ.sum()
    out = np.zeros(k)
    out[: min(k, occ.size)] = occ[:k]
    return out
