"""Pure numpy fallback for the compiled angular projection."""
import numpy as np


def gaussian_projection(ra, rb, inv_two_sr2, inv_two_sc2, norm, cos_phi, cos_table, symmetric):
    ra = np.asarray(ra, dtype=float)
    rb = np.asarray(rb, dtype=float)
    n_m = cos_table.shape[0]
    out = np.zeros((n_m, ra.size, rb.size))
    for i, r1 in enumerate(ra):
        j0 = i if symmetric else 0
        r2 = rb[j0:, None]
        sq = r1 * r1 + r2 * r2
        cross = 2.0 * r1 * r2 * cos_phi[None, :]
        rho2 = np.maximum(sq - cross, 0.0)
        var2 = np.maximum(0.25 * (sq + cross), 0.0)
        psi = norm * np.exp(-(rho2 * inv_two_sr2 + var2 * inv_two_sc2))
        out[:, i, j0:] = (psi @ cos_table.T).T
    if symmetric:
        iu = np.triu_indices(ra.size, 1)
        out[:, iu[1], iu[0]] = out[:, iu[0], iu[1]]
    return out
