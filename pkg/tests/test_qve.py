import numpy as np
import pytest

from pairgen.errors import UnsupportedConfiguration
from pairgen.field import FieldConfig, PotentialInterpolant
from pairgen.qve import integrate_qve, integrate_qve_trajectory
from pairgen.solver import integrate_mode, integrate_mode_trajectory


@pytest.fixture(scope="module")
def linear_short():
    return PotentialInterpolant.build(FieldConfig(0.3, 10.0, 0.4, 0.2, 0.0))


def test_qve_matches_reduced(linear_short, rng):
    for q in rng.uniform(-0.8, 0.8, size=(5, 3)):
        assert integrate_qve(q, linear_short) == pytest.approx(
            integrate_mode(q, linear_short), abs=1e-8)


def test_qve_trajectory_matches_reduced(linear_short):
    q = [0.2, 0.3, -0.1]
    ts = np.linspace(-20.0, linear_short.t_end, 30)
    a = integrate_qve_trajectory(q, linear_short, ts)
    b = np.array([f for _, f in integrate_mode_trajectory(q, linear_short, ts)])
    assert np.allclose(a, b, atol=1e-8)


def test_qve_rejects_elliptic(short_field):
    with pytest.raises(UnsupportedConfiguration):
        integrate_qve([0, 0, 0], short_field)
    with pytest.raises(UnsupportedConfiguration):
        integrate_qve_trajectory([0, 0, 0], short_field, [0.0])


def test_qve_null_field():
    fld = PotentialInterpolant.build(FieldConfig(0.0, 10.0, 0.4))
    assert integrate_qve([0.5, 0.0, 0.0], fld) == 0.0
