import math
import os
import subprocess
import sys

import numpy as np
import pytest

from schmidt2d.config import validate_config
from schmidt2d.models import GaussianPairState, write_table
from schmidt2d.pipeline import run_pipeline

from conftest import WEAK
from oracles import entropy_1d, mehler_z

GAUSS = {"type": "gaussian", "sigma_r": 2.0, "sigma_c": 1 / math.sqrt(2)}


def test_separable_end_to_end():
    cfg = validate_config({"model": {"type": "gaussian", "sigma_r": math.sqrt(2),
                                     "sigma_c": 1 / math.sqrt(2)}, "grid_n": 64, "m_max": 4})
    rep = run_pipeline(cfg, write=False).report
    assert rep.von_neumann_entropy < 1e-6
    assert rep.lambdas[0] > 1 - 1e-7


def test_interacting_end_to_end():
    cfg = validate_config({"model": GAUSS, "grid_n": 96, "m_max": 10, "s_max": 10})
    rep = run_pipeline(cfg, write=False).report
    assert abs(rep.total_norm - 1) < 1e-5
    assert rep.von_neumann_entropy == pytest.approx(2 * entropy_1d(mehler_z(*WEAK)), abs=1e-5)


def test_tabulated_files_reproduce_analytic_run(tmp_path):
    g = GaussianPairState(*WEAK)
    x_rel, x_cm = np.linspace(0, 25, 1001), np.linspace(0, 12, 1001)
    write_table(tmp_path / "rel.txt", x_rel, g.rel(x_rel), comment="psi_rel, sigma_r = 2")
    write_table(tmp_path / "cm.txt", x_cm, g.cm(x_cm), comment="psi_cm, sigma_c = 1/sqrt(2)")
    tab = validate_config({"model": {"type": "tabulated", "rel_path": "rel.txt",
                                     "cm_path": "cm.txt"}, "grid_n": 96},
                          base_dir=tmp_path)
    ana = validate_config({"model": GAUSS, "grid_n": 96})
    a = run_pipeline(tab, write=False).report
    b = run_pipeline(ana, write=False).report
    assert not a.warnings
    assert np.max(np.abs(a.lambdas - b.lambdas)) < 1e-6


@pytest.mark.parametrize("forced, expected", [("python", "python")])
def test_backend_can_be_forced(forced, expected):
    env = dict(os.environ, SCHMIDT2D_BACKEND=forced)
    out = subprocess.run([sys.executable, "-c", "import schmidt2d; print(schmidt2d.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected


def test_python_backend_pipeline_matches(tmp_path):
    code = (
        "import math, schmidt2d\n"
        "from schmidt2d.config import validate_config\n"
        "from schmidt2d.pipeline import run_pipeline\n"
        "cfg = validate_config({'model': {'type': 'gaussian', 'sigma_r': 2.0,"
        " 'sigma_c': 1 / math.sqrt(2)}, 'grid_n': 48, 'm_max': 6, 's_max': 6})\n"
        "print(repr(run_pipeline(cfg, write=False).report.von_neumann_entropy))\n"
    )
    env = dict(os.environ, SCHMIDT2D_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    cfg = validate_config({"model": GAUSS, "grid_n": 48, "m_max": 6, "s_max": 6})
    here = run_pipeline(cfg, write=False).report.von_neumann_entropy
    assert float(out.stdout) == pytest.approx(here, abs=1e-12)
