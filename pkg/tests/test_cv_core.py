from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybrid_mbqc.cv_core import (
    GridError,
    GridSpec,
    GridWavefunction,
    centered_grid,
    default_grid,
    default_sigma,
    gaussian_wavefunction,
    make_grid,
    normalize,
)


def test_grid_basics():
    g = make_grid(-1.0, 1.0, 11)
    assert g.dx == pytest.approx(0.2)
    assert g.points[0] == -1.0 and g.points[-1] == 1.0
    assert g.nearest_index(0.04) == 5
    with pytest.raises(GridError):
        g.nearest_index(3.0)


@pytest.mark.parametrize("args", [(1.0, 0.0, 16), (0.0, 1.0, 4), (0.0, float("nan"), 16)])
def test_grid_rejects_bad_specs(args):
    with pytest.raises(GridError):
        GridSpec(*args)


@pytest.mark.parametrize("center", [-3.5, 0.0, 0.3, 12.0])
@pytest.mark.parametrize("n", [64, 65, 2048])
def test_centered_grid_holds_center(center, n):
    g = centered_grid(center, 5.0, n)
    assert np.min(np.abs(g.points - center)) < 1e-12


@pytest.mark.parametrize("sigma", [0.5, 2.0, default_sigma(500)])
def test_gaussian_moments(sigma):
    g = default_grid(1.5, sigma, 2048)
    wf = gaussian_wavefunction(g, 1.5, sigma)
    assert wf.norm == pytest.approx(1.0, abs=1e-10)
    assert wf.mean == pytest.approx(1.5, abs=1e-9)
    assert wf.std == pytest.approx(sigma, rel=1e-6)


def test_gaussian_warns_when_truncated():
    with pytest.warns(UserWarning):
        gaussian_wavefunction(make_grid(-1, 1, 64), 0.0, 1.0)


def test_normalize_and_zero():
    g = make_grid(-2, 2, 32)
    wf, norm = normalize(GridWavefunction(g, 3 * np.ones(32, dtype=complex)))
    assert wf.norm == pytest.approx(1.0)
    assert norm > 0
    with pytest.raises(GridError):
        normalize(GridWavefunction(g, np.zeros(32, dtype=complex)))


def test_wavefunction_shape_mismatch():
    with pytest.raises(GridError):
        GridWavefunction(make_grid(-1, 1, 16), np.ones(8, dtype=complex))


@given(st.floats(-50, 50), st.floats(0.2, 20))
def test_gaussian_norm_property(center, sigma):
    wf = gaussian_wavefunction(default_grid(center, sigma, 512), center, sigma)
    assert abs(wf.norm - 1) < 1e-8
    assert abs(wf.mean - center) < 1e-6 * max(1, sigma)
