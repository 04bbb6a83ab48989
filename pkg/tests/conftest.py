import math

import numpy as np
import pytest
from hypothesis import settings

from pairgen.field import FieldConfig, PotentialInterpolant

E0 = 0.1 * math.sqrt(2.0)

# First calls load compiled kernels; wall-clock deadlines would be flaky.
settings.register_profile("pairgen", deadline=None)
settings.load_profile("pairgen")


@pytest.fixture(scope="session")
def fig1a_cfg():
    return FieldConfig(E0, 100.0, 0.05, 0.0, 0.0)


@pytest.fixture(scope="session")
def fig1a_field(fig1a_cfg):
    return PotentialInterpolant.build(fig1a_cfg)


@pytest.fixture(scope="session")
def elliptic_field():
    return PotentialInterpolant.build(FieldConfig(E0, 100.0, 0.05, 0.3, 0.6))


@pytest.fixture(scope="session")
def short_field():
    """A brief strong pulse that keeps integrations cheap."""
    return PotentialInterpolant.build(FieldConfig(0.3, 10.0, 0.4, 0.2, 0.5))


@pytest.fixture
def rng():
    return np.random.default_rng(7)
