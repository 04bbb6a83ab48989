import json
import math

import numpy as np
import pytest

from pairgen.config import load_config, parse_config
from pairgen.errors import ConfigError, PairgenError
from pairgen.field import FieldConfig
from pairgen.io import (
    RunManifest,
    derived_parameters,
    read_spectrum_csv,
    write_outputs,
    write_spectrum_csv,
)
from pairgen.solver import SolverSettings
from pairgen.sweep import MomentumGrid, SpectrumField

TOML = """
[field]
e0_over_ecr = 0.1414213562373095
tau_m = 100.0
omega_m = 0.05
delta = 0.5

[grid]
qx = [-2.0, 2.0]
nx = 11
qy = [-1.0, 1.0]
ny = 5

[solver]
rel_tol = 1e-9
formulation = "full10"

[output]
workers = 2
"""


def test_load_toml(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(TOML)
    run = load_config(path)
    assert run.field.delta == 0.5 and run.field.phi == 0.0
    assert run.grid.nx == 11 and run.grid.qx_min == -2.0
    assert run.settings.rel_tol == 1e-9 and run.settings.abs_tol == 1e-10
    assert run.settings.formulation == "full10"
    assert run.output["workers"] == 2


def test_defaults_and_echo_round_trip():
    run = parse_config({"field": {"e0_over_ecr": 0.1, "tau_m": 50, "omega_m": 0.1}})
    assert run.grid.nx == 201 and run.grid.qx_max == 1.0
    again = parse_config(json.loads(json.dumps(run.echo())))
    assert again.echo() == run.echo()


@pytest.mark.parametrize("data,key", [
    ({"field": {"tau_m": 1, "omega_m": 1}}, "e0_over_ecr"),
    ({"field": {"e0_over_ecr": 0.1, "tau_m": 1, "omega_m": 1, "colour": 1}}, "colour"),
    ({"field": {"e0_over_ecr": 0.1, "tau_m": 1, "omega_m": 1}, "extra": {}}, "extra"),
    ({"field": {"e0_over_ecr": "big", "tau_m": 1, "omega_m": 1}}, "e0_over_ecr"),
    ({"field": {"e0_over_ecr": 0.1, "tau_m": 1, "omega_m": 1}, "grid": {"nx": 3.5}}, "nx"),
    ({"field": {"e0_over_ecr": 0.1, "tau_m": 1, "omega_m": 1}, "grid": {"qx": [1]}}, "qx"),
    ({"field": {"e0_over_ecr": 0.1, "tau_m": 1, "omega_m": 1}, "solver": {"formulation": "x"}},
     "formulation"),
    ({"field": {"e0_over_ecr": 0.1, "tau_m": 1, "omega_m": 1}, "output": {"workers": 0}},
     "workers"),
    ({"field": {"e0_over_ecr": 0.1, "tau_m": 1, "omega_m": 1, "delta": 2.0}}, "delta"),
])
def test_config_errors_name_the_field(data, key):
    with pytest.raises(ConfigError) as info:
        parse_config(data)
    assert info.value.field == key


def test_toml_syntax_error_has_position(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("[field]\ne0_over_ecr = = 1\n")
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert info.value.line == 2 and info.value.column is not None


def test_manifest_replays_as_config(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(TOML)
    run = load_config(path)
    manifest = tmp_path / "m.json"
    manifest.write_text(json.dumps({"config": run.echo()}))
    assert load_config(manifest).echo() == run.echo()


def test_derived_parameters_for_fig4():
    d = derived_parameters(FieldConfig(0.1 * math.sqrt(2), 100.0, 0.5))
    assert d["threshold_order"] == 5
    assert d["gamma"] == pytest.approx(3.5355, abs=1e-4)
    assert d["sigma"] == pytest.approx(50.0)  # omega * tau
    assert d["ring_radii"]["5"] == pytest.approx(0.72284, abs=1e-5)
    assert len(d["ring_radii"]) == 5
    assert derived_parameters(FieldConfig(0.0, 10.0, 0.0))["gamma"] is None


def _spec():
    g = MomentumGrid(-1.0, 1.0, 4, -0.5, 0.5, 3)
    vals = np.arange(12, dtype=float).reshape(4, 3) * 1e-9 + 1.0 / 3.0
    return SpectrumField(g, vals, FieldConfig(0.1, 10.0, 0.5), SolverSettings())


def test_spectrum_csv_round_trip_is_exact(tmp_path):
    spec = _spec()
    path = write_spectrum_csv(spec, tmp_path / "s.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "q_x,q_y,f" and len(lines) == 13
    back = read_spectrum_csv(path)
    assert np.array_equal(back.values, spec.values)
    assert np.array_equal(back.grid.qx, spec.grid.qx)


def test_read_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(PairgenError):
        read_spectrum_csv(bad)
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("q_x,q_y,f\n0,0,1\n0,1,1\n1,0,1\n")
    with pytest.raises(PairgenError):
        read_spectrum_csv(ragged)


def test_write_outputs(tmp_path):
    spec = _spec()
    manifest = RunManifest({"field": {}}, derived_parameters(spec.cfg), extra={"x": float("nan")})
    files = write_outputs(spec, None, [], manifest, tmp_path / "o", stem="run")
    assert files["spectrum"].name == "run.csv"
    data = json.loads(files["manifest"].read_text())
    assert data["determinism"]["seed_free"] is True
    assert data["x"] is None
    assert json.loads(files["rings"].read_text()) == []
