# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled angular projection for Gaussian pair states."""
import numpy as np
cimport numpy as cnp
cimport openmp
from cython.parallel cimport parallel, prange
from libc.math cimport exp
from libc.stdlib cimport free, malloc

cnp.import_array()


def gaussian_projection(const double[::1] ra, const double[::1] rb,
                        double inv_two_sr2, double inv_two_sc2, double norm,
                        const double[::1] cos_phi, const double[:, ::1] cos_table,
                        bint symmetric):
    """Return ``S[m, i, j] = sum_k Psi(ra_i, rb_j, phi_k) * cos_table[m, k]``.

    With ``symmetric`` set, ``ra`` and ``rb`` must be the same nodes; only
    ``j >= i`` is evaluated and the lower triangle is mirrored.
    """
    cdef Py_ssize_t na = ra.shape[0], nb = rb.shape[0]
    cdef Py_ssize_t n_m = cos_table.shape[0], n_phi = cos_phi.shape[0]
    cdef Py_ssize_t half = n_phi // 2
    cdef Py_ssize_t i, j, k, m, j0
    cdef double r1, r2, sq, cross, rho2, var2, a0, a1, a2, a3
    cdef double *psi
    out_arr = np.zeros((n_m, na, nb), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    if n_phi % 2:
        raise ValueError("n_phi must be even")

    # Psi depends on cos(phi) only, so phi_k and phi_{n-k} share a sample:
    # evaluate k = 0 .. n/2 and double the interior terms.
    with nogil, parallel():
        psi = <double *> malloc((half + 1) * sizeof(double))
        for i in prange(na, schedule="dynamic"):
            r1 = ra[i]
            j0 = i if symmetric else 0
            for j in range(j0, nb):
                r2 = rb[j]
                sq = r1 * r1 + r2 * r2
                for k in range(half + 1):
                    cross = 2.0 * r1 * r2 * cos_phi[k]
                    rho2 = sq - cross
                    if rho2 < 0.0:
                        rho2 = 0.0
                    var2 = 0.25 * (sq + cross)
                    if var2 < 0.0:
                        var2 = 0.0
                    psi[k] = norm * exp(-(rho2 * inv_two_sr2 + var2 * inv_two_sc2))
                for m in range(n_m):
                    a0 = 0.0
                    a1 = 0.0
                    a2 = 0.0
                    a3 = 0.0
                    k = 1
                    while k + 3 < half:
                        a0 = a0 + psi[k] * cos_table[m, k]
                        a1 = a1 + psi[k + 1] * cos_table[m, k + 1]
                        a2 = a2 + psi[k + 2] * cos_table[m, k + 2]
                        a3 = a3 + psi[k + 3] * cos_table[m, k + 3]
                        k = k + 4
                    while k < half:
                        a0 = a0 + psi[k] * cos_table[m, k]
                        k = k + 1
                    a0 = 2.0 * ((a0 + a1) + (a2 + a3))
                    a0 = a0 + psi[0] * cos_table[m, 0] + psi[half] * cos_table[m, half]
                    out[m, i, j] = a0
                    if symmetric:
                        out[m, j, i] = a0
        free(psi)
    return out_arr
