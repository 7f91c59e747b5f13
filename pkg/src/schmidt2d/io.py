"""File formats written and read by the pipeline.

Kernel dump (``kernel_m<m>.txt``)::

    # schmidt2d kernel
    # m = 3
    # N = 96
    # rho_max = 10.0
    # n_phi = 256
    <N rows of N values, row-major, %.17e>

Orbital table (``orbitals_m<m>.txt``)::

    # m = 3
    # kappa = k_0 k_1 ...
    # columns: rho chi_0 chi_1 ...
    <one row per grid node>

Spectrum CSV: header ``s,m,lambda`` and one row per signed-m occupancy.
Report: JSON object (see :func:`write_report`).
"""
from __future__ import annotations

import json

import numpy as np


def _header_fields(path):
    fields = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                fields[key.strip()] = value.strip()
    return fields


def write_kernel(path, kernel):
    header = "\n".join([
        "schmidt2d kernel",
        f"m = {kernel.m}",
        f"N = {kernel.grid.n}",
        f"rho_max = {kernel.grid.rho_max!r}",
        f"n_phi = {kernel.n_phi}",
    ])
    np.savetxt(path, kernel.matrix, fmt="%.17e", header=header, comments="# ")


def read_kernel(path):
    """Return ``(header dict, matrix)`` from a kernel dump."""
    f = _header_fields(path)
    meta = {
        "m": int(f["m"]),
        "N": int(f["N"]),
        "rho_max": float(f["rho_max"]),
        "n_phi": None if f.get("n_phi") in (None, "None") else int(f["n_phi"]),
    }
    matrix = np.loadtxt(path, comments="#", ndmin=2)
    if matrix.shape != (meta["N"], meta["N"]):
        raise ValueError(f"{path}: matrix shape {matrix.shape} does not match N = {meta['N']}")
    return meta, matrix


def write_orbitals(path, channel):
    header = "\n".join([
        f"m = {channel.m}",
        "kappa = " + " ".join(f"{k:.17e}" for k in channel.kappas),
        "columns: rho " + " ".join(f"chi_{s}" for s in range(channel.s_max)),
    ])
    data = np.column_stack([channel.grid.nodes, channel.orbitals])
    np.savetxt(path, data, fmt="%.17e", header=header, comments="# ")


def read_orbitals(path):
    """Return ``(m, kappas, rho, chi)`` with ``chi[:, s]`` the orbital samples."""
    f = _header_fields(path)
    kappas = np.array([float(v) for v in f["kappa"].split()])
    data = np.loadtxt(path, comments="#", ndmin=2)
    return int(f["m"]), kappas, data[:, 0], data[:, 1:]


def write_spectrum_csv(path, report):
    with open(path, "w", newline="\n") as fh:
        fh.write("s,m,lambda\n")
        for s, m, lam in report.occupancies:
            fh.write(f"{s},{m},{lam!r}\n")


def read_spectrum_csv(path):
    data = np.genfromtxt(path, delimiter=",", names=True, dtype=None, encoding="utf-8")
    return [(int(r["s"]), int(r["m"]), float(r["lambda"])) for r in np.atleast_1d(data)]


def write_report(path, report, config=None, extra=None):
    doc = {"report": report.to_dict()}
    if config is not None:
        doc["config"] = config
    if extra:
        doc.update(extra)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=False)
        fh.write("\n")
    return doc
