"""Run configuration: YAML document -> validated :class:`RunConfig`."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import yaml

from .angular import RULES, default_n_phi
from .errors import ConfigurationError

MAX_CHANNEL_ORBITALS = 20_000
MAX_GRID_N = 4096


@dataclass
class ModelConfig:
    type: str
    sigma_r: Optional[float] = None
    sigma_c: Optional[float] = None
    rel_path: Optional[str] = None
    cm_path: Optional[str] = None
    interpolation_order: int = 3


@dataclass
class OutputConfig:
    dir: str = "schmidt2d_out"
    report: str = "report.json"
    spectrum: str = "spectrum.csv"
    orbitals: Optional[str] = None
    kernels: Optional[str] = None


@dataclass
class Tolerances:
    norm_deficit: float = 1e-4


@dataclass
class OracleConfig:
    n_cart: int = 40
    half_width: float = 6.0
    k: int = 10


@dataclass
class RunConfig:
    model: ModelConfig
    grid_n: int
    rho_max: float = 10.0
    rule: str = "gauss-legendre"
    m_max: int = 10
    s_max: int = 10
    n_phi: Union[int, str] = "auto"
    outputs: OutputConfig = field(default_factory=OutputConfig)
    tolerances: Tolerances = field(default_factory=Tolerances)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    base_dir: str = field(default=".", repr=False)

    @property
    def resolved_n_phi(self):
        return default_n_phi(self.m_max) if self.n_phi == "auto" else int(self.n_phi)

    def resolve(self, path):
        p = Path(path)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def to_dict(self):
        d = dataclasses.asdict(self)
        d.pop("base_dir")
        d["n_phi_resolved"] = self.resolved_n_phi
        return d


_SECTIONS = {
    "outputs": OutputConfig,
    "tolerances": Tolerances,
    "oracle": OracleConfig,
}
_MODEL_KEYS = {
    "gaussian": {"type", "sigma_r", "sigma_c"},
    "tabulated": {"type", "rel_path", "cm_path", "interpolation_order"},
}


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_pos(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0 and math.isfinite(v)


def _check_model(raw, problems):
    if not isinstance(raw, dict):
        problems.append("model: expected a mapping with a 'type' key")
        return None
    kind = raw.get("type")
    if kind not in _MODEL_KEYS:
        problems.append(f"model.type: expected one of {sorted(_MODEL_KEYS)}, got {kind!r}")
        return None
    for key in sorted(set(raw) - _MODEL_KEYS[kind]):
        problems.append(f"model.{key}: unknown key for model type {kind!r}")
    if kind == "gaussian":
        for key in ("sigma_r", "sigma_c"):
            if key not in raw:
                problems.append(f"model.{key}: required for gaussian model")
            elif not _is_pos(raw[key]):
                problems.append(f"model.{key}: must be a positive number, got {raw[key]!r}")
    else:
        for key in ("rel_path", "cm_path"):
            if not isinstance(raw.get(key), str):
                problems.append(f"model.{key}: required path for tabulated model")
        order = raw.get("interpolation_order", 3)
        if order not in (1, 3):
            problems.append(f"model.interpolation_order: must be 1 or 3, got {order!r}")
    known = {k: v for k, v in raw.items() if k in _MODEL_KEYS[kind]}
    return ModelConfig(**known)


def _check_section(name, raw, cls, problems):
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        problems.append(f"{name}: expected a mapping")
        return cls()
    names = {f.name for f in dataclasses.fields(cls)}
    for key in sorted(set(raw) - names):
        problems.append(f"{name}.{key}: unknown key")
    return cls(**{k: v for k, v in raw.items() if k in names})


def validate_config(raw, base_dir=".", overrides=None) -> RunConfig:
    """Parse and validate a configuration, reporting every problem at once.

    ``raw`` is YAML text or an already-parsed mapping. ``overrides`` maps
    top-level keys (or ``outputs.dir``) to values applied before validation.
    """
    if isinstance(raw, str):
        try:
            raw = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise ConfigurationError(f"config is not valid YAML: {exc}", [str(exc)]) from exc
    if not isinstance(raw, dict):
        raise ConfigurationError("config must be a mapping", ["<root>: expected a mapping"])
    raw = dict(raw)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if "." in key:
            sec, sub = key.split(".", 1)
            raw[sec] = dict(raw.get(sec) or {})
            raw[sec][sub] = value
        else:
            raw[key] = value

    problems = []
    top = {f.name for f in dataclasses.fields(RunConfig)} - {"base_dir"}
    for key in sorted(set(raw) - top):
        problems.append(f"{key}: unknown key")

    model = _check_model(raw.get("model"), problems) if "model" in raw else None
    if model is None and "model" not in raw:
        problems.append("model: required")
    if "grid_n" not in raw:
        problems.append("grid_n: required")

    kwargs = {}
    for key in ("grid_n", "m_max", "s_max"):
        if key in raw:
            v = raw[key]
            lo = 0 if key == "m_max" else 1
            if not _is_int(v) or v < lo:
                problems.append(f"{key}: must be an integer >= {lo}, got {v!r}")
            kwargs[key] = v
    if "rho_max" in raw:
        if not _is_pos(raw["rho_max"]):
            problems.append(f"rho_max: must be a positive number, got {raw['rho_max']!r}")
        kwargs["rho_max"] = raw["rho_max"]
    if "rule" in raw:
        if raw["rule"] not in RULES:
            problems.append(f"rule: must be one of {RULES}, got {raw['rule']!r}")
        kwargs["rule"] = raw["rule"]
    if "n_phi" in raw:
        kwargs["n_phi"] = raw["n_phi"]

    sections = {name: _check_section(name, raw.get(name), cls, problems)
                for name, cls in _SECTIONS.items()}

    if model is None:
        model = ModelConfig(type="invalid")
    cfg = RunConfig(model=model, grid_n=kwargs.pop("grid_n", 0), base_dir=str(base_dir),
                    **kwargs, **sections)

    ints_ok = all(_is_int(getattr(cfg, k)) for k in ("grid_n", "m_max", "s_max"))
    if ints_ok:
        if cfg.grid_n > MAX_GRID_N:
            problems.append(f"grid_n: {cfg.grid_n} exceeds the cap {MAX_GRID_N}")
        if "grid_n" in raw and 1 <= cfg.grid_n < 8:
            problems.append(f"grid_n: must be >= 8, got {cfg.grid_n}")
        if cfg.s_max > cfg.grid_n >= 8:
            problems.append(f"s_max: {cfg.s_max} exceeds grid_n = {cfg.grid_n}")
        if (cfg.m_max + 1) * cfg.s_max > MAX_CHANNEL_ORBITALS:
            problems.append(
                f"m_max, s_max: (m_max + 1) * s_max = {(cfg.m_max + 1) * cfg.s_max} "
                f"exceeds the cap {MAX_CHANNEL_ORBITALS}"
            )
        if cfg.n_phi != "auto":
            lo = 4 * cfg.m_max + 16
            if not _is_int(cfg.n_phi) or cfg.n_phi % 2 or cfg.n_phi < lo:
                problems.append(f"n_phi: must be 'auto' or an even integer >= {lo}, got {cfg.n_phi!r}")

    out = cfg.outputs
    for key in ("dir", "report", "spectrum"):
        if not isinstance(getattr(out, key), str) or not getattr(out, key):
            problems.append(f"outputs.{key}: must be a non-empty path")
    for key in ("orbitals", "kernels"):
        if getattr(out, key) is not None and not isinstance(getattr(out, key), str):
            problems.append(f"outputs.{key}: must be a path or null")
    if not _is_pos(cfg.tolerances.norm_deficit):
        problems.append(f"tolerances.norm_deficit: must be positive, got {cfg.tolerances.norm_deficit!r}")
    orc = cfg.oracle
    if not _is_int(orc.n_cart) or orc.n_cart < 2:
        problems.append(f"oracle.n_cart: must be an integer >= 2, got {orc.n_cart!r}")
    if not _is_pos(orc.half_width):
        problems.append(f"oracle.half_width: must be positive, got {orc.half_width!r}")
    if not _is_int(orc.k) or orc.k < 1:
        problems.append(f"oracle.k: must be a positive integer, got {orc.k!r}")

    if problems:
        raise ConfigurationError(
            "invalid configuration:\n  " + "\n  ".join(problems), problems
        )
    return cfg


def load_config(path, overrides=None) -> RunConfig:
    path = Path(path)
    text = path.read_text()
    return validate_config(text, base_dir=path.parent, overrides=overrides)
