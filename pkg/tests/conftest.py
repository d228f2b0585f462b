from __future__ import annotations

import warnings

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(autouse=True)
def _quiet_grid_warnings():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="Gaussian center")
        yield


def random_params(rng, n_particles):
    from hybrid_mbqc.spin_core import SpinCoherentParams

    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return SpinCoherentParams.from_vector(v / np.linalg.norm(v), n_particles)
