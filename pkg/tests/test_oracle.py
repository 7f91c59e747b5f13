import numpy as np
import pytest

from schmidt2d.analysis import assemble_spectrum
from schmidt2d.angular import angular_kernel_all
from schmidt2d.errors import OracleError
from schmidt2d.oracle import bipartite_matrix, oracle_spectrum
from schmidt2d.radial_solver import solve_all


def test_separable_oracle(free_state):
    occ = oracle_spectrum(free_state, n_cart=20, half_width=5.0, k=3)
    assert abs(occ[0] - 1.0) < 1e-4


def test_trailing_occupancies_vanish(free_state):
    occ = oracle_spectrum(free_state, n_cart=16, half_width=5.0, k=40)
    assert np.all(occ[1:] < 1e-10)


def test_k_beyond_matrix_size_padded(free_state):
    occ = oracle_spectrum(free_state, n_cart=3, half_width=5.0, k=20)
    assert occ.shape == (20,) and np.all(occ[9:] == 0)


def test_memory_guard(free_state):
    with pytest.raises(OracleError):
        oracle_spectrum(free_state, n_cart=51)


def test_bipartite_matrix_symmetric(weak_state):
    mat = bipartite_matrix(weak_state, 10, 4.0)
    np.testing.assert_array_equal(mat, mat.T)


def test_oracle_agrees_with_channel_solver(weak_state, grid96):
    rep = assemble_spectrum(solve_all(angular_kernel_all(weak_state, grid96, 10), 10))
    occ = oracle_spectrum(weak_state, n_cart=40, half_width=6.0, k=10)
    assert np.max(np.abs(occ - rep.lambdas[:10])) < 1e-3
