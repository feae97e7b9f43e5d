"""Scenario configuration: flat INI-style key/value files with sections.

Every key is validated against a per-mode schema; violations raise
ConfigError naming the offending section and field.  Keys are
case-sensitive (``kappa_A`` etc.).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

_MODES = ("verify", "run", "bubble", "converge")

_SCHEMA = {
    "scenario": {"mode", "seed", "threads", "out"},
    "verify": {"n", "m_edge", "dt", "eps", "n_points", "tolerance", "checks"},
    "geometry": {"preset", "radius", "radius_rate", "cap_angle", "rate", "lx", "ly"},
    "energy": {"preset", "p"},
    "grid": {"n_r", "n_s"},
    "time": {"t_end", "dt", "cfl_safety", "dt_max", "integrator", "record_every"},
    "bc": {"all", "r0", "r1", "s0", "s1"},
    "initial": {"preset", "c", "theta0", "width"},
    "system": {"kind", "rho"},
    "bubble": {
        "a0",
        "a1",
        "b0",
        "b1",
        "m0",
        "m1",
        "kappa_A",
        "kappa_B",
        "kappa_S",
        "N_r",
        "N_theta",
        "t_end",
        "dt",
        "cfl_safety",
        "integrator",
        "record_every",
        "init_A",
        "init_B",
        "init_S",
    },
    "converge": {"study", "base_n", "levels", "min_order"},
}

_SECTIONS_BY_MODE = {
    "verify": {"scenario", "verify"},
    "run": {"scenario", "geometry", "energy", "grid", "time", "bc", "initial", "system"},
    "bubble": {"scenario", "bubble"},
    "converge": {"scenario", "converge"},
}


@dataclass
class ScenarioConfig:
    mode: str
    seed: int = 1234
    threads: int = 1
    out: str | None = None
    sections: dict = field(default_factory=dict)

    def get(self, section: str, key: str, default=None, cast=str):
        raw = self.sections.get(section, {}).get(key)
        if raw is None:
            return default
        try:
            if cast is bool:
                return raw.strip().lower() in ("1", "true", "yes", "on")
            return cast(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{section}.{key}: cannot parse {raw!r} as {cast.__name__}") from exc

    def require(self, section: str, key: str, cast=str):
        val = self.get(section, key, default=None, cast=cast)
        if val is None:
            raise ConfigError(f"{section}.{key}: required field is missing")
        return val


def parse_config(path: str) -> ScenarioConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # preserve key case (kappa_A, N_theta, ...)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    sections = {name: dict(parser.items(name)) for name in parser.sections()}
    if "scenario" not in sections:
        raise ConfigError("scenario: section is missing")
    mode = sections["scenario"].get("mode")
    if mode not in _MODES:
        raise ConfigError(f"scenario.mode: expected one of {_MODES}, got {mode!r}")

    allowed_sections = _SECTIONS_BY_MODE[mode]
    for name, kv in sections.items():
        if name not in _SCHEMA:
            raise ConfigError(f"{name}: unknown section")
        if name not in allowed_sections:
            raise ConfigError(f"{name}: section not used in mode {mode!r}")
        for key in kv:
            if key not in _SCHEMA[name]:
                raise ConfigError(f"{name}.{key}: unknown field")

    cfg = ScenarioConfig(mode=mode, sections=sections)
    cfg.seed = cfg.get("scenario", "seed", 1234, int)
    cfg.threads = cfg.get("scenario", "threads", 1, int)
    cfg.out = cfg.get("scenario", "out", None, str)
    if cfg.threads < 1:
        raise ConfigError("scenario.threads: must be >= 1")
    return cfg


def default_config(mode: str) -> ScenarioConfig:
    if mode not in _MODES:
        raise ConfigError(f"scenario.mode: expected one of {_MODES}, got {mode!r}")
    return ScenarioConfig(mode=mode, sections={"scenario": {"mode": mode}})


# --- builders consumed by the CLI ------------------------------------------

def build_chart(cfg: ScenarioConfig):
    from .geometry import library

    preset = cfg.get("geometry", "preset", "disc")
    radius = cfg.get("geometry", "radius", 1.0, float)
    radius_rate = cfg.get("geometry", "radius_rate", 0.0, float)
    if preset == "plane":
        return library.plane(cfg.get("geometry", "lx", 1.0, float), cfg.get("geometry", "ly", 1.0, float))
    if preset == "graph":
        return library.default_graph()
    if preset == "cylinder":
        return library.cylinder(radius=radius)
    if preset == "disc":
        return library.disc(radius=radius)
    if preset == "sphere_cap":
        angle = cfg.get("geometry", "cap_angle", float(np.pi / 3.0), float)
        return library.sphere_cap(radius0=radius, radius_rate=radius_rate, angle=angle)
    if preset == "full_sphere":
        return library.full_sphere(radius0=radius, radius_rate=radius_rate)
    if preset == "scaling_plane":
        return library.scaling_plane(cfg.get("geometry", "rate", 0.5, float))
    raise ConfigError(f"geometry.preset: unknown preset {preset!r}")


def build_energy(cfg: ScenarioConfig, section: str = "energy"):
    from .solver.energy import energy_preset

    name = cfg.get(section, "preset", "linear")
    try:
        return energy_preset(name, cfg.get(section, "p", 1.0, float))
    except ValueError as exc:
        raise ConfigError(f"{section}.preset: {exc}") from exc


def _parse_bc(spec: str):
    from .solver.state import dirichlet, neumann

    parts = spec.split(":")
    if parts[0] == "neumann":
        return neumann()
    if parts[0] == "dirichlet":
        value = float(parts[1]) if len(parts) > 1 else 0.0
        return dirichlet(value)
    raise ConfigError(f"bc: unknown condition {spec!r} (use neumann or dirichlet:VALUE)")


def build_bcs(cfg: ScenarioConfig, chart):
    bc_all = cfg.get("bc", "all", "neumann")
    out = {}
    for edge, role in chart.roles.items():
        if role.kind != "physical":
            if cfg.get("bc", edge) is not None:
                raise ConfigError(f"bc.{edge}: edge has role {role.kind!r}, no condition allowed")
            continue
        out[edge] = _parse_bc(cfg.get("bc", edge, bc_all))
    return out


def parse_init_spec(spec: str):
    """'preset[:arg1[:arg2]]' -> (preset, params) for initial_field."""
    parts = spec.split(":")
    preset = parts[0]
    params: dict = {}
    if preset == "constant" and len(parts) > 1:
        params["c"] = float(parts[1])
    elif preset in ("gaussian", "indicator_patch"):
        if len(parts) > 1:
            params["theta0"] = float(parts[1])
        if len(parts) > 2:
            params["width"] = float(parts[2])
    elif preset in ("bessel", "sine", "constant"):
        pass
    else:
        raise ConfigError(f"unknown initial preset {spec!r}")
    return preset, params
