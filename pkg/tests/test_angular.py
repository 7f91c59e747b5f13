import math

import numpy as np
import pytest

from schmidt2d import angular
from schmidt2d.angular import (AngularKernel, angular_kernel, angular_kernel_all, angular_nodes,
                               build_radial_grid, kernel_block)
from schmidt2d.errors import ConfigurationError, StateEvaluationError
from schmidt2d.geometry import pair_radii
from schmidt2d.models import GaussianPairState, normalize_state

from conftest import WEAK
from oracles import bessel_i_series, check_bessel_entry


class CountingState:
    """Generic (non-Gaussian) state wrapper that counts amplitude evaluations."""

    def __init__(self, inner):
        self.inner = inner
        self.calls = 0

    def evaluate(self, rho, varrho):
        self.calls += np.size(rho)
        return self.inner.evaluate(rho, varrho)


# -- grids ------------------------------------------------------------------

def test_weights_integrate_constant():
    g = build_radial_grid(16, 8.0)
    assert abs(g.weights.sum() - 8.0) < 1e-12
    assert np.all(g.nodes > 0) and np.all(g.nodes < 8.0) and np.all(np.diff(g.nodes) > 0)


def test_gauss_legendre_gaussian_moment():
    g = build_radial_grid(32, 8.0)
    val = np.sum(g.weights * g.nodes * np.exp(-g.nodes**2 / 2))
    assert abs(val - (1 - math.exp(-32))) < 1e-10


def test_midpoint_rule():
    g = build_radial_grid(200, 8.0, rule="midpoint")
    assert abs(g.weights.sum() - 8.0) < 1e-12
    assert g.nodes[0] > 0 and g.nodes[-1] < 8.0
    val = np.sum(g.weights * g.nodes * np.exp(-g.nodes**2 / 2))
    assert abs(val - 1.0) < 1e-4


@pytest.mark.parametrize("n, rho_max, rule", [(8, 0.0, "gauss-legendre"), (7, 1.0, "gauss-legendre"),
                                              (16, -2.0, "gauss-legendre"), (16, 1.0, "simpson")])
def test_invalid_grid(n, rho_max, rule):
    with pytest.raises(ConfigurationError):
        build_radial_grid(n, rho_max, rule)


def test_grid_arrays_read_only():
    g = build_radial_grid(8, 1.0)
    with pytest.raises(ValueError):
        g.nodes[0] = 0.0


# -- kernels ----------------------------------------------------------------

@pytest.mark.parametrize("m", [1, 2, 5])
def test_separable_state_has_only_m0(free_state, grid48, m):
    k = angular_kernel(free_state, grid48, m)
    assert np.max(np.abs(k.matrix)) < 1e-12


def test_separable_m0_closed_form(free_state, grid48):
    k = angular_kernel(free_state, grid48, 0)
    r = grid48.nodes
    f = np.sqrt(r) * np.exp(-r**2 / 2)
    want = (2 * np.pi) ** 2 * free_state.norm_constant * np.outer(f, f)
    np.testing.assert_allclose(k.matrix, want, rtol=1e-12, atol=1e-15)
    assert np.linalg.matrix_rank(k.matrix, tol=1e-10 * np.abs(k.matrix).max()) == 1


def test_bessel_series_against_scipy():
    special = pytest.importorskip("scipy.special")
    for m in range(6):
        for x in (-7.3, -0.5, 0.0, 0.2, 3.0, 12.5, 40.0):
            assert bessel_i_series(m, x) == pytest.approx(special.iv(m, x), rel=1e-13, abs=1e-300)


@pytest.mark.parametrize("m", [0, 1, 2, 3, 6])
def test_interacting_kernel_bessel_closed_form(weak_state, grid96, m):
    k = angular_kernel(weak_state, grid96, m)
    rng = np.random.default_rng(m)
    for _ in range(10):
        i, j = rng.integers(0, grid96.n, 2)
        resolvable, err = check_bessel_entry(k.matrix[i, j], WEAK, weak_state.norm_constant, m,
                                             grid96.nodes[i], grid96.nodes[j])
        assert err < (1e-9 if resolvable else 1e-13)


def test_kernel_small_entries_limited_by_rounding(grid96):
    # tiny-argument entries: x = beta r1 r2 ~ 6e-3 gives I_4 / I_0 ~ 5e-12
    st = normalize_state(GaussianPairState(*WEAK), grid96)
    k = angular_kernel(st, grid96, 4)
    i, j = 1, 40
    resolvable, err = check_bessel_entry(k.matrix[i, j], WEAK, st.norm_constant, 4,
                                         grid96.nodes[i], grid96.nodes[j])
    assert not resolvable and err < 1e-13


def test_batch_equals_single_channel_calls(weak_state, grid48):
    batch = angular_kernel_all(weak_state, grid48, 6)
    for m, kb in enumerate(batch):
        ks = angular_kernel(weak_state, grid48, m, n_phi=kb.n_phi)
        assert np.max(np.abs(kb.matrix - ks.matrix)) < 1e-13


def test_degenerate_batch(weak_state, grid48):
    (only,) = angular_kernel_all(weak_state, grid48, 0)
    np.testing.assert_array_equal(only.matrix, angular_kernel(weak_state, grid48, 0).matrix)


def test_evaluation_count_uses_triangle_only(weak_state, grid48):
    counting = CountingState(weak_state)
    angular_kernel_all(counting, grid48, 3, n_phi=64)
    n = grid48.n
    assert counting.calls == n * (n + 1) // 2 * 64


def test_generic_path_matches_gaussian_path(weak_state, grid48):
    fast = angular_kernel_all(weak_state, grid48, 4)
    slow = angular_kernel_all(CountingState(weak_state), grid48, 4)
    for a, b in zip(fast, slow):
        assert np.max(np.abs(a.matrix - b.matrix)) < 1e-13


@pytest.mark.skipif(angular.BACKEND != "cython", reason="compiled extension not built")
def test_compiled_and_python_backends_agree(grid96):
    st = normalize_state(GaussianPairState(3.0, 0.5), grid96)
    a = angular_kernel_all(st, grid96, 12, backend="cython")
    b = angular_kernel_all(st, grid96, 12, backend="python")
    for ka, kb in zip(a, b):
        assert np.max(np.abs(ka.matrix - kb.matrix)) < 1e-13


def test_negative_m_reproduces_matrix_bitwise(weak_state, grid48):
    ms = np.arange(7)
    plus = kernel_block(weak_state, grid48.nodes, grid48.nodes, ms, 256, symmetric=True)
    minus = kernel_block(weak_state, grid48.nodes, grid48.nodes, -ms, 256, symmetric=True)
    np.testing.assert_array_equal(plus, minus)


def test_symmetric_before_symmetrisation(weak_state, grid48):
    full = kernel_block(weak_state, grid48.nodes, grid48.nodes, range(8), 256, symmetric=False)
    for a in full:
        assert np.max(np.abs(a - a.T)) < 1e-12
    for k in angular_kernel_all(weak_state, grid48, 7):
        np.testing.assert_array_equal(k.matrix, k.matrix.T)


def test_sine_projection_vanishes(weak_state, grid48):
    phi = angular_nodes(256)
    r = grid48.nodes
    worst = 0.0
    for i in range(0, grid48.n, 5):
        rho, varrho = pair_radii(r[i], r[:, None], np.cos(phi)[None, :])
        psi = weak_state.evaluate(rho, varrho)
        for m in range(1, 8):
            s = 2 * np.pi * np.sqrt(r[i] * r) * (2 * np.pi / 256) * (psi @ np.sin(m * phi))
            worst = max(worst, np.max(np.abs(s)))
    assert worst < 1e-12


def test_angular_resolution_converged(weak_state, grid48):
    a = angular_kernel_all(weak_state, grid48, 8, n_phi=256)
    b = angular_kernel_all(weak_state, grid48, 8, n_phi=512)
    for ka, kb in zip(a, b):
        assert np.max(np.abs(ka.matrix - kb.matrix)) < 1e-12


def test_kernel_vanishes_towards_origin(weak_state):
    g = build_radial_grid(64, 10.0)
    # rows scale like sqrt(r) near the origin
    rows = kernel_block(weak_state, [1e-6, 4e-6], g.nodes, [0], 256)[0]
    np.testing.assert_allclose(rows[1], 2.0 * rows[0], rtol=1e-5)
    row = kernel_block(weak_state, [1e-12], g.nodes, [0, 1], 256)
    assert np.max(np.abs(row)) < 1e-5


@pytest.mark.parametrize("n_phi", [26, 29, 0])
def test_n_phi_precondition(weak_state, grid48, n_phi):
    # 4 m + 16 = 28 for m = 3, and n_phi must be even
    with pytest.raises(ConfigurationError):
        angular_kernel(weak_state, grid48, 3, n_phi=n_phi)


def test_non_finite_state_reports_location(grid48):
    class Broken:
        def evaluate(self, rho, varrho):
            out = np.exp(-np.asarray(rho) ** 2)
            return np.where(np.asarray(varrho) > 3.0, np.nan, out)

    with pytest.raises(StateEvaluationError) as info:
        angular_kernel(Broken(), grid48, 0)
    assert info.value.varrho > 3.0


def test_gaussian_overflow_reported(grid48):
    st = GaussianPairState(2.0, 0.7, norm_constant=float("inf"))
    with pytest.raises(StateEvaluationError):
        angular_kernel(st, grid48, 0)


def test_from_function_wraps_analytic_kernel(grid48):
    k = AngularKernel.from_function(lambda a, b: np.exp(-(a - b) ** 2), grid48)
    assert k.matrix.shape == (48, 48)
    assert k.evaluator([0.5], [0.5])[0, 0] == 1.0
