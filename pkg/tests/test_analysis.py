import math

import numpy as np
import pytest

from pairgen.analysis import (
    asymmetry_y,
    axis_profile,
    count_runs,
    detect_rings,
    effective_mass,
    mirror_index,
    radial_profile,
    ring_radius_analytic,
    ring_radius_energy_balance,
    spectrum_features,
    threshold_order,
)
from pairgen.errors import ConfigError, EmptySpectrum, RingNotFound
from pairgen.field import FieldConfig
from pairgen.solver import SolverSettings
from pairgen.sweep import MomentumGrid, SpectrumField

E0 = 0.1 * math.sqrt(2.0)
FIG4A = FieldConfig(E0, 100.0, 0.5, 0.0, 0.0)


def _spec(values_fn, half=1.0, n=101, cfg=FIG4A):
    g = MomentumGrid.square(half, n)
    qx, qy = np.meshgrid(g.qx, g.qy, indexing="ij")
    return SpectrumField(g, values_fn(qx, qy), cfg, SolverSettings())


def test_effective_mass_and_five_photon_radius():
    assert effective_mass(FIG4A) == pytest.approx(math.sqrt(1.04), rel=1e-14)
    assert threshold_order(FIG4A) == 5
    assert ring_radius_analytic(5, FIG4A) == pytest.approx(0.72284, abs=5e-6)
    assert round(ring_radius_analytic(5, FIG4A), 4) == 0.7228


@pytest.mark.parametrize("omega", [0.05, 0.1, 0.3, 0.5, 0.7])
def test_closed_form_agrees_with_root_finder(omega):
    cfg = FieldConfig(E0, 100.0, omega)
    for n in range(threshold_order(cfg), threshold_order(cfg) + 4):
        assert ring_radius_analytic(n, cfg) == pytest.approx(
            ring_radius_energy_balance(n, cfg), abs=1e-12)


def test_below_threshold_reports_order():
    with pytest.raises(RingNotFound) as info:
        ring_radius_analytic(4, FIG4A)
    assert info.value.threshold_order == 5
    with pytest.raises(RingNotFound):
        ring_radius_energy_balance(4, FIG4A)


def test_effective_mass_needs_frequency():
    with pytest.raises(ConfigError):
        effective_mass(FieldConfig(E0, 100.0, 0.0))


def test_radial_profile_of_radial_function():
    spec = _spec(lambda x, y: np.hypot(x, y))
    centers, means, counts = radial_profile(spec)
    ok = counts > 0
    d = centers[1]
    assert np.all(np.abs(means[ok] - centers[ok]) <= 0.5 * d)
    assert counts.sum() == 101 * 101


@pytest.mark.parametrize("offset", [-0.012, 0.0, 0.004, 0.015])
def test_detects_synthetic_ring(offset):
    r0 = ring_radius_analytic(5, FIG4A) + offset
    spec = _spec(lambda x, y: np.exp(-((np.hypot(x, y) - r0) / 0.03) ** 2), n=181)
    (rep,) = detect_rings(spec, [5])
    assert rep.found
    assert rep.detected_radius == pytest.approx(r0, abs=2e-3)
    assert rep.detection_prominence > 1.0


def test_missing_ring_is_reported_not_raised():
    spec = _spec(lambda x, y: np.exp(-(x**2 + y**2) / 0.01))
    (rep,) = detect_rings(spec, [5])
    assert not rep.found and math.isnan(rep.detected_radius)


def test_mirror_index_and_asymmetry():
    qy = np.linspace(-1, 1, 5)
    assert list(mirror_index(qy)) == [4, 3, 2, 1, 0]
    assert list(mirror_index(np.linspace(0, 1, 3))) == [0, -1, -1]
    sym = _spec(lambda x, y: np.exp(-(x**2 + y**2)))
    assert asymmetry_y(sym.values, sym.grid.qy) == 0.0
    shifted = _spec(lambda x, y: np.exp(-(x**2 + (y - 0.3) ** 2)))
    assert asymmetry_y(shifted.values, shifted.grid.qy) > 0.1


def test_count_runs():
    col = np.array([0, 1, 1, 0, 0, 1, 0, 1, 1])
    assert count_runs(col, 0.5) == 3
    assert count_runs(np.ones(4), 0.5) == 1
    assert count_runs(np.zeros(4), 0.5) == 0


def test_features_of_shifted_and_split_spectra():
    one = spectrum_features(_spec(lambda x, y: np.exp(-(x**2 + (y - 0.4) ** 2) / 0.02)))
    assert one.peak_location[1] == pytest.approx(0.4, abs=0.011)
    assert one.lobe_count_y == 1
    two = spectrum_features(_spec(
        lambda x, y: np.exp(-(x**2 + (y - 0.5) ** 2) / 0.02)
        + 0.9 * np.exp(-(x**2 + (y + 0.5) ** 2) / 0.02)))
    assert two.lobe_count_y == 2
    assert two.to_dict()["lobe_count_y"] == 2


def test_empty_spectrum_raises():
    with pytest.raises(EmptySpectrum):
        spectrum_features(_spec(lambda x, y: 0.0 * x))


def test_synthetic_rings_within_one_bin():
    rng = np.random.default_rng(11)
    cfg_n = 5
    q5 = ring_radius_analytic(cfg_n, FIG4A)
    g = MomentumGrid.square(1.0, 181)
    d = g.qx[1] - g.qx[0]
    qx, qy = np.meshgrid(g.qx, g.qy, indexing="ij")
    r = np.hypot(qx, qy)
    for r0 in q5 + rng.uniform(-2.5 * d, 2.5 * d, size=20):
        width = rng.uniform(0.02, 0.05)
        spec = SpectrumField(g, np.exp(-((r - r0) / width) ** 2), FIG4A, SolverSettings())
        (rep,) = detect_rings(spec, [cfg_n])
        assert rep.found and abs(rep.detected_radius - r0) <= d


def test_axis_profile_measures_major_axis():
    # Elliptic ring: 0.72 along q_x, 0.76 along q_y.
    spec = _spec(lambda x, y: np.exp(-((np.hypot(x / 0.72, y / 0.76) - 1.0) / 0.04) ** 2),
                 n=181)
    (axis,) = detect_rings(spec, [5], profile="axis")
    (radial,) = detect_rings(spec, [5], profile="radial")
    assert axis.profile == "axis" and axis.detected_radius == pytest.approx(0.72, abs=2e-3)
    assert radial.detected_radius > axis.detected_radius + 0.01


def test_axis_profile_interpolates_off_node_rows():
    g = MomentumGrid(-1.0, 1.0, 41, -1.0, 0.9, 40)
    qx, qy = np.meshgrid(g.qx, g.qy, indexing="ij")
    spec = SpectrumField(g, 1.0 + qx**2 + 0.0 * qy, FIG4A, SolverSettings())
    r, prof = axis_profile(spec)
    assert r[0] == 0.0 and np.allclose(prof, 1.0 + r**2)


def test_unknown_profile_rejected():
    with pytest.raises(ConfigError):
        detect_rings(_spec(lambda x, y: x * 0 + 1), [5], profile="diagonal")
