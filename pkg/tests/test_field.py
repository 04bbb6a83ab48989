import math

import numpy as np
import pytest
from scipy.integrate import quad

from pairgen.errors import ConfigError, WindowRangeError
from pairgen.field import (
    FieldConfig,
    PotentialInterpolant,
    electric_field,
    integration_window,
    keldysh,
    vector_potential,
)

E0 = 0.1 * math.sqrt(2.0)


def test_fig1a_peak_field_and_components():
    cfg = FieldConfig(E0, 100.0, 0.05, 0.0, 0.0)
    assert np.allclose(electric_field(0.0, cfg), [E0, 0.0, 0.0], atol=1e-15)


def test_circular_field_magnitude_constant_over_cycle():
    cfg = FieldConfig(E0, 100.0, 0.05, 0.0, 1.0)
    t = np.linspace(-1.0, 1.0, 11)
    e = electric_field(t, cfg)
    env = np.exp(-t**2 / (2 * 100.0**2))
    assert np.allclose(np.linalg.norm(e, axis=-1) / env, E0 / math.sqrt(2.0), rtol=1e-12)


def test_elliptic_intensity_matches_linear_on_cycle_average():
    lin = FieldConfig(E0, 1e6, 0.05, 0.0, 0.0)
    ell = FieldConfig(E0, 1e6, 0.05, 0.0, 0.7)
    t = np.linspace(0.0, 2 * math.pi / 0.05, 4001)[:-1]
    i_lin = np.mean(np.sum(electric_field(t, lin) ** 2, axis=-1))
    i_ell = np.mean(np.sum(electric_field(t, ell) ** 2, axis=-1))
    assert i_ell == pytest.approx(i_lin, rel=1e-6)
    assert 2 * i_lin == pytest.approx(E0**2, rel=1e-6)


def test_keldysh_and_sigma_quotes():
    assert keldysh(FieldConfig(E0, 100.0, 0.05)) == pytest.approx(0.3536, abs=5e-4)
    assert keldysh(FieldConfig(E0, 100.0, 0.1)) == pytest.approx(0.7071, abs=5e-4)
    assert keldysh(FieldConfig(E0, 100.0, 0.5)) == pytest.approx(3.536, abs=5e-4)
    assert FieldConfig(E0, 100.0, 0.05).sigma == pytest.approx(5.0)
    assert FieldConfig(E0, 300.0, 0.05).sigma == pytest.approx(15.0)


def test_keldysh_rejects_null_field():
    with pytest.raises(ConfigError):
        keldysh(FieldConfig(0.0, 100.0, 0.05))


@pytest.mark.parametrize("kwargs", [
    dict(e0_over_ecr=-0.1, tau=100.0, omega=0.05),
    dict(e0_over_ecr=0.1, tau=0.0, omega=0.05),
    dict(e0_over_ecr=0.1, tau=100.0, omega=-1.0),
    dict(e0_over_ecr=0.1, tau=100.0, omega=0.05, delta=1.5),
    dict(e0_over_ecr=float("nan"), tau=100.0, omega=0.05),
])
def test_invalid_configs(kwargs):
    with pytest.raises(ConfigError):
        FieldConfig(**kwargs)


def test_window_matches_envelope_floor():
    lo, hi = integration_window(FieldConfig(E0, 100.0, 0.05))
    assert hi == pytest.approx(100.0 * math.sqrt(2 * math.log(1e8)))
    assert lo == -hi
    assert hi == pytest.approx(607.0, abs=0.5)


def test_potential_tolerance_and_derivative(elliptic_field):
    cfg = elliptic_field.cfg
    assert elliptic_field.max_midpoint_error <= elliptic_field.tolerance
    # Temporal gauge: E = -dA/dt, checked by central differences.
    t = np.array([-150.0, -3.3, 0.0, 42.0, 210.0])
    h = 1e-3
    a = lambda s: vector_potential(s, elliptic_field)  # noqa: E731
    da = (a(t + h) - a(t - h)) / (2 * h)
    assert np.allclose(-da, electric_field(t, cfg), atol=1e-8)


def test_potential_against_adaptive_quadrature(elliptic_field):
    cfg = elliptic_field.cfg
    t0 = elliptic_field.t_start
    for t in (-200.0, -7.0, 0.0, 33.0, 300.0):
        for c in (0, 1):
            ref, _ = quad(lambda s: -electric_field(s, cfg)[c], t0, t, limit=500,
                          epsabs=1e-13, epsrel=1e-12)
            assert vector_potential(t, elliptic_field)[c] == pytest.approx(ref, abs=1e-10)


def test_potential_vanishes_before_pulse(elliptic_field):
    assert np.allclose(vector_potential(elliptic_field.t_start, elliptic_field), 0.0)


def test_potential_outside_window_raises(fig1a_field):
    with pytest.raises(WindowRangeError):
        vector_potential(fig1a_field.t_end + 1.0, fig1a_field)


def test_interpolant_shape_and_call(short_field):
    ts = np.linspace(short_field.t_start, short_field.t_end, 7)
    a = short_field(ts)
    assert a.shape == (7, 3)
    assert np.all(a[:, 2] == 0.0)
    assert short_field.knots[0] == short_field.t_start


def test_explicit_window():
    cfg = FieldConfig(0.1, 5.0, 0.5)
    pi = PotentialInterpolant.build(cfg, window=(-20.0, 20.0))
    assert pi.t_start == -20.0 and pi.t_end == pytest.approx(20.0)


def test_residual_potential_after_few_cycle_pulse(fig1a_field):
    # Closed-form Gaussian integral: E0 tau sqrt(2 pi) exp(-sigma^2 / 2).
    expected = E0 * 100.0 * math.sqrt(2 * math.pi) * math.exp(-12.5)
    # The window drops tails of size ~ 2 E0 * floor * tau^2 / t_end ~ 5e-8.
    assert abs(vector_potential(fig1a_field.t_end, fig1a_field)[0]) == pytest.approx(
        expected, abs=1e-7)
    assert expected == pytest.approx(1.3e-4, abs=0.05e-4)
