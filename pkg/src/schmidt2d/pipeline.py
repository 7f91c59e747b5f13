"""End-to-end run: state -> kernels -> channels -> spectrum -> files."""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, io
from .analysis import assemble_spectrum, reconstruction_residual
from .angular import BACKEND, angular_kernel_all, build_radial_grid
from .config import RunConfig
from .errors import NormDeficitWarning
from .models import GaussianPairState, TabulatedPairState, load_table, normalize_state
from .oracle import oracle_spectrum
from .radial_solver import solve_all

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_DEGRADED = 3


@dataclass
class PipelineResult:
    report: object
    channels: list
    state: object
    exit_code: int = EXIT_OK
    files: dict = field(default_factory=dict)
    oracle: Optional[dict] = None


def build_state(config: RunConfig):
    model = config.model
    if model.type == "gaussian":
        return GaussianPairState(float(model.sigma_r), float(model.sigma_c))
    rel = load_table(config.resolve(model.rel_path))
    cm = load_table(config.resolve(model.cm_path))
    return TabulatedPairState(rel, cm, interpolation_order=model.interpolation_order)


def compare_with_oracle(report, state, config: RunConfig):
    orc = config.oracle
    ref = oracle_spectrum(state, orc.n_cart, orc.half_width, orc.k)
    ours = np.zeros(orc.k)
    lams = report.lambdas[: orc.k]
    ours[: lams.size] = lams
    return {
        "n_cart": orc.n_cart,
        "half_width": orc.half_width,
        "oracle": ref.tolist(),
        "channels": ours.tolist(),
        "max_abs_difference": float(np.max(np.abs(ref - ours))),
    }


def run_pipeline(config: RunConfig, strict=False, with_oracle=False, write=True) -> PipelineResult:
    grid = build_radial_grid(config.grid_n, float(config.rho_max), config.rule)
    state = normalize_state(build_state(config), grid)
    log.info("norm constant %.12g, backend %s", state.norm_constant, BACKEND)

    kernels = angular_kernel_all(state, grid, config.m_max, config.resolved_n_phi)
    channels = solve_all(kernels, config.s_max)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NormDeficitWarning)
        report = assemble_spectrum(channels, config.tolerances.norm_deficit)
    report.reconstruction_residual = reconstruction_residual(channels, state,
                                                             config.resolved_n_phi)
    if isinstance(state, TabulatedPairState) and state.truncated_tail:
        report.warnings.append(
            "truncated tail: tabulated functions were queried beyond their last sample"
        )
    for msg in report.warnings:
        log.warning(msg)

    degraded = abs(report.norm_deficit) > config.tolerances.norm_deficit
    result = PipelineResult(report, channels, state,
                            EXIT_DEGRADED if (strict and degraded) else EXIT_OK)
    if with_oracle:
        result.oracle = compare_with_oracle(report, state, config)

    if write:
        out = config.resolve(config.outputs.dir)
        out.mkdir(parents=True, exist_ok=True)
        spectrum = out / config.outputs.spectrum
        io.write_spectrum_csv(spectrum, report)
        result.files["spectrum"] = str(spectrum)
        if config.outputs.orbitals:
            odir = out / config.outputs.orbitals
            odir.mkdir(parents=True, exist_ok=True)
            for ch in channels:
                io.write_orbitals(odir / f"orbitals_m{ch.m}.txt", ch)
            result.files["orbitals"] = str(odir)
        if config.outputs.kernels:
            kdir = out / config.outputs.kernels
            kdir.mkdir(parents=True, exist_ok=True)
            for k in kernels:
                io.write_kernel(kdir / f"kernel_m{k.m}.txt", k)
            result.files["kernels"] = str(kdir)
        report_path = out / config.outputs.report
        extra = {
            "version": __version__,
            "backend": BACKEND,
            "norm_constant": state.norm_constant,
            "status": "degraded" if degraded else "ok",
        }
        if result.oracle is not None:
            extra["oracle_comparison"] = result.oracle
        io.write_report(report_path, report, config.to_dict(), extra)
        result.files["report"] = str(report_path)
    return result
