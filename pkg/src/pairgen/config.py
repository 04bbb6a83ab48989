"""TOML run configuration: ``[field]``, ``[grid]``, ``[solver]`` and ``[output]`` tables.

Example::

    [field]
    e0_over_ecr = 0.1414213562373095
    tau_m = 100.0
    omega_m = 0.05
    phi = 0.0
    delta = 0.0

    [grid]
    qx = [-1.0, 1.0]
    nx = 201
    qy = [-1.0, 1.0]
    ny = 201
    qz = 0.0

    [solver]
    rel_tol = 1e-8
    abs_tol = 1e-10
    formulation = "reduced"

    [output]
    dir = "out/fig1a"
    workers = 4

A run manifest (JSON with a ``config`` object) is accepted in place of a TOML
file, which lets a recorded run be replayed exactly.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .field import DEFAULT_ENVELOPE_FLOOR, FieldConfig
from .solver import SolverSettings
from .sweep import MomentumGrid

DEFAULT_GRID = {"qx": [-1.0, 1.0], "nx": 201, "qy": [-1.0, 1.0], "ny": 201, "qz": 0.0}

_FIELD_KEYS = {"e0_over_ecr", "tau_m", "omega_m", "phi", "delta"}
_FIELD_REQUIRED = {"e0_over_ecr", "tau_m", "omega_m"}
_GRID_KEYS = set(DEFAULT_GRID)
_SOLVER_KEYS = {"rel_tol", "abs_tol", "max_steps", "formulation", "envelope_floor"}
_OUTPUT_KEYS = {"dir", "workers"}
_SECTIONS = {"field": _FIELD_KEYS, "grid": _GRID_KEYS, "solver": _SOLVER_KEYS,
             "output": _OUTPUT_KEYS}


@dataclass
class RunConfig:
    field: FieldConfig
    grid: MomentumGrid
    settings: SolverSettings
    envelope_floor: float = DEFAULT_ENVELOPE_FLOOR
    output: dict = field(default_factory=dict)

    def echo(self) -> dict:
        """Config in file layout; feeding it back through :func:`parse_config` round-trips."""
        g = self.grid
        return {
            "field": {
                "e0_over_ecr": self.field.e0_over_ecr,
                "tau_m": self.field.tau,
                "omega_m": self.field.omega,
                "phi": self.field.phi,
                "delta": self.field.delta,
            },
            "grid": {"qx": [g.qx_min, g.qx_max], "nx": g.nx, "qy": [g.qy_min, g.qy_max],
                     "ny": g.ny, "qz": g.qz},
            "solver": {**self.settings.to_dict(), "envelope_floor": self.envelope_floor},
            "output": dict(self.output),
        }


def _number(section, key, value, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {key} must be a number, got {value!r}", field=key)
    if kind is int:
        if float(value) != int(value):
            raise ConfigError(f"[{section}] {key} must be an integer", field=key)
        return int(value)
    return float(value)


def _range(key, value):
    if not (isinstance(value, list) and len(value) == 2):
        raise ConfigError(f"[grid] {key} must be a [min, max] pair", field=key)
    return [_number("grid", key, v) for v in value]


def parse_config(data: dict) -> RunConfig:
    """Validate a decoded config mapping and apply defaults."""
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown section(s): {sorted(unknown)}", field=sorted(unknown)[0])
    for name, allowed in _SECTIONS.items():
        section = data.get(name, {})
        if not isinstance(section, dict):
            raise ConfigError(f"[{name}] must be a table", field=name)
        extra = set(section) - allowed
        if extra:
            key = sorted(extra)[0]
            raise ConfigError(f"[{name}] unknown key {key!r}", field=key)

    fsec = data.get("field", {})
    missing = _FIELD_REQUIRED - set(fsec)
    if missing:
        key = sorted(missing)[0]
        raise ConfigError(f"[field] missing required key {key!r}", field=key)
    fcfg = FieldConfig(
        e0_over_ecr=_number("field", "e0_over_ecr", fsec["e0_over_ecr"]),
        tau=_number("field", "tau_m", fsec["tau_m"]),
        omega=_number("field", "omega_m", fsec["omega_m"]),
        phi=_number("field", "phi", fsec.get("phi", 0.0)),
        delta=_number("field", "delta", fsec.get("delta", 0.0)),
    )

    gsec = {**DEFAULT_GRID, **data.get("grid", {})}
    qx = _range("qx", gsec["qx"])
    qy = _range("qy", gsec["qy"])
    grid = MomentumGrid(qx[0], qx[1], _number("grid", "nx", gsec["nx"], int),
                        qy[0], qy[1], _number("grid", "ny", gsec["ny"], int),
                        _number("grid", "qz", gsec["qz"]))

    ssec = dict(data.get("solver", {}))
    floor = _number("solver", "envelope_floor", ssec.pop("envelope_floor", DEFAULT_ENVELOPE_FLOOR))
    if not 0.0 < floor < 1.0:
        raise ConfigError("[solver] envelope_floor must lie in (0, 1)", field="envelope_floor")
    kwargs = {}
    for key in ("rel_tol", "abs_tol"):
        if key in ssec:
            kwargs[key] = _number("solver", key, ssec[key])
    if "max_steps" in ssec:
        kwargs["max_steps"] = _number("solver", "max_steps", ssec["max_steps"], int)
    if "formulation" in ssec:
        kwargs["formulation"] = str(ssec["formulation"])
    settings = SolverSettings(**kwargs)

    osec = dict(data.get("output", {}))
    if "workers" in osec:
        osec["workers"] = _number("output", "workers", osec["workers"], int)
        if osec["workers"] < 1:
            raise ConfigError("[output] workers must be >= 1", field="workers")
    return RunConfig(fcfg, grid, settings, floor, osec)


_POS = re.compile(r"line (\d+), column (\d+)")


def load_config(path) -> RunConfig:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc.msg} (at line {exc.lineno}, column {exc.colno})",
                              line=exc.lineno, column=exc.colno) from exc
        data = data.get("config", data)
    else:
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            m = _POS.search(str(exc))
            line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
            raise ConfigError(f"{path}: {exc}", line=line, column=col) from exc
    return parse_config(data)
