import numpy as np

from schmidt2d import io
from schmidt2d.analysis import assemble_spectrum
from schmidt2d.angular import angular_kernel_all
from schmidt2d.radial_solver import solve_all


def test_kernel_dump_round_trip(tmp_path, weak_state, grid48):
    k = angular_kernel_all(weak_state, grid48, 2)[2]
    path = tmp_path / "kernel_m2.txt"
    io.write_kernel(path, k)
    meta, matrix = io.read_kernel(path)
    assert meta == {"m": 2, "N": 48, "rho_max": 10.0, "n_phi": 256}
    np.testing.assert_array_equal(matrix, k.matrix)


def test_orbital_table_round_trip(tmp_path, weak_state, grid48):
    ch = solve_all(angular_kernel_all(weak_state, grid48, 1), 4)[1]
    path = tmp_path / "orbitals_m1.txt"
    io.write_orbitals(path, ch)
    m, kappas, rho, chi = io.read_orbitals(path)
    assert m == 1
    np.testing.assert_array_equal(kappas, ch.kappas)
    np.testing.assert_array_equal(rho, grid48.nodes)
    np.testing.assert_array_equal(chi, ch.orbitals)


def test_spectrum_csv_round_trip(tmp_path, weak_state, grid48):
    rep = assemble_spectrum(solve_all(angular_kernel_all(weak_state, grid48, 3), 3))
    path = tmp_path / "spectrum.csv"
    io.write_spectrum_csv(path, rep)
    assert path.read_text().splitlines()[0] == "s,m,lambda"
    assert io.read_spectrum_csv(path) == rep.occupancies
