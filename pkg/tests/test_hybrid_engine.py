from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybrid_mbqc.cv_core import centered_grid, gaussian_wavefunction, make_grid
from hybrid_mbqc.graph_model import arbitrary_rotation_graph, chain_graph, complete_graph, z_rotation_graph
from hybrid_mbqc.hybrid_engine import (
    PLUS,
    CapacityError,
    EngineError,
    ZeroProbabilityError,
    apply_cz,
    apply_hadamard,
    bec_outcome_distribution,
    default_cv_input,
    fidelity,
    homodyne_cv,
    homodyne_marginal,
    init_state,
    marginal_stats,
    measure_bec,
    product_state,
    register_norm_error,
    to_dense,
)
from hybrid_mbqc.spin_core import SpinCoherentParams, coherent_to_fock, hadamard_unitary


def _pair(n=3, grid=None):
    grid = grid or make_grid(-4, 4, 33)
    wf = gaussian_wavefunction(grid, 0.0, 0.6)
    return product_state({"b": SpinCoherentParams(*PLUS, n)}, {"c": wf})


@pytest.mark.parametrize("t", [0.1, 1.0, 2 * np.pi / 500])
def test_cz_phase_pointwise(t):
    state = apply_cz(_pair(), "b", "c", t)
    alpha, beta = state.fields("b")
    x = state.grid("c").points
    assert np.abs(alpha.ravel() - PLUS[0]).max() < 1e-12
    assert np.abs(beta.ravel() - PLUS[1] * np.exp(-1j * x * t)).max() < 1e-12


@given(st.floats(0.01, 3), st.floats(0.01, 3))
def test_cz_phase_additivity(t1, t2):
    s1 = apply_cz(apply_cz(_pair(), "b", "c", t1), "b", "c", t2)
    s2 = apply_cz(_pair(), "b", "c", t1 + t2)
    assert np.abs(s1.fields("b")[1] - s2.fields("b")[1]).max() < 1e-12


def test_cz_zero_time_is_identity():
    s = _pair()
    assert apply_cz(s, "b", "c", 0.0) is s


def test_cz_on_dead_axis_fails():
    s = _pair()
    _, s = homodyne_cv(s, "c", "postselect", x0=0.0)
    with pytest.raises(EngineError, match="already been homodyned"):
        apply_cz(s, "b", "c", 1.0)


@pytest.mark.parametrize("n", [1, 4, 10])
def test_hadamard_matches_dense(n):
    s = apply_hadamard(product_state({"b": SpinCoherentParams(0.6, 0.8j, n)}, {}), "b")
    dense = hadamard_unitary(n).entries @ coherent_to_fock(SpinCoherentParams(0.6, 0.8j, n)).amplitudes
    assert np.abs(to_dense(s) - dense).max() < 1e-10


def test_capacity_limit():
    g = make_grid(-3, 3, 16)
    wf = gaussian_wavefunction(g, 0, 0.4)
    with pytest.raises(CapacityError):
        product_state({}, {"c1": wf, "c2": wf, "c3": wf})


def test_init_rejects_invalid_topology():
    with pytest.raises(EngineError):
        init_state(complete_graph("BCB"), 2)


def test_distribution_sums_to_one():
    g = arbitrary_rotation_graph(40)
    state = init_state(g, 8, cv_inputs={c: default_cv_input(0.0, 40, n_points=128) for c in ("c1", "c2")})
    for b in ("bl", "b0", "br"):
        p = bec_outcome_distribution(state, b, 0.4, 40)
        assert abs(p.sum() - 1) < 1e-10 and np.all(p >= 0)


def test_measurement_modes(rng):
    g = z_rotation_graph(50)
    state = init_state(g, 6, cv_inputs={"c2": default_cv_input(0.0, 50, n_points=128)})
    rec, after = measure_bec(state, "b3", 0.0, 50, mode="sample", rng=rng)
    assert 0 <= rec.outcome <= 6 and 0 < rec.probability <= 1
    assert "b3" not in after.bec_registers
    assert abs(after.norm - 1) < 1e-10
    with pytest.raises(EngineError):
        measure_bec(state, "b3", 0.0, 50, mode="sample")
    with pytest.raises(EngineError):
        measure_bec(state, "b3", 0.0, 50, mode="fixed", q=99)
    with pytest.raises(EngineError):
        measure_bec(state, "b3", 0.0, 50, mode="guess")


def test_zero_probability_outcome():
    # |+> in the Hadamard basis has zero weight on some outcomes at N = 1
    state = product_state({"b": SpinCoherentParams(*PLUS, 1)}, {})
    p = bec_outcome_distribution(state, "b", 12.5, 50)
    q = int(np.argmin(p))
    if p[q] < 1e-300:
        with pytest.raises(ZeroProbabilityError):
            measure_bec(state, "b", 12.5, 50, mode="fixed", q=q)
    else:
        rec, _ = measure_bec(state, "b", 12.5, 50, mode="fixed", q=q)
        assert rec.probability == pytest.approx(p[q])


def test_homodyne_modes(rng):
    g = z_rotation_graph(50)
    state = init_state(g, 6, cv_inputs={"c2": default_cv_input(0.5, 50, n_points=256)})
    _, state = measure_bec(state, "b3", 0.5, 50, mode="fixed", q=3)
    rec, same = homodyne_cv(state, "c2", "expectation")
    assert same is state and rec.marginal_std > 0
    mean, std = marginal_stats(state, "c2")
    assert rec.outcome == pytest.approx(mean)
    m = homodyne_marginal(state, "c2")
    assert abs(m.sum() * state.grid("c2").dx - 1) < 1e-10
    rec, pinned = homodyne_cv(state, "c2", "postselect", x0=0.5)
    assert rec.outcome == pytest.approx(0.5)
    assert pinned.coherent_params("b1").is_normalized()
    rec, sampled = homodyne_cv(state, "c2", "sample", rng=rng)
    assert "c2" in sampled.pinned
    with pytest.raises(EngineError):
        homodyne_cv(state, "c2", "postselect")
    with pytest.raises(EngineError):
        homodyne_cv(state, "c2", "nope")


def test_coherent_params_requires_disentangled():
    state = init_state(z_rotation_graph(50), 2, cv_inputs={"c2": default_cv_input(0.0, 50, n_points=64)})
    with pytest.raises(EngineError, match="entangled"):
        state.coherent_params("b1")


def test_fidelity_averaging_and_n_mismatch():
    state = init_state(z_rotation_graph(50), 2, cv_inputs={"c2": default_cv_input(0.0, 50, n_points=64)})
    f = fidelity(state, "b3", SpinCoherentParams(*PLUS, 2))
    assert 0 < f < 1
    with pytest.raises(EngineError):
        fidelity(state, "b3", SpinCoherentParams(*PLUS, 3))


@given(st.integers(1, 400), st.floats(-2, 2))
def test_registers_stay_normalized(n, theta):
    g = chain_graph(5)
    cvs = {c: gaussian_wavefunction(centered_grid(0.0, 4.0, 32), 0.0, 0.5) for c in ("c1", "c3")}
    state = init_state(g, n, cv_inputs=cvs)
    state = apply_hadamard(state, "b2")
    assert register_norm_error(state) < 1e-12
    _, state = measure_bec(state, "b0", theta, 20, mode="fixed", q=n // 2)
    assert abs(state.norm - 1) < 1e-10


def test_measuring_unknown_register():
    with pytest.raises(EngineError):
        measure_bec(_pair(), "zz", 0.0, 10, mode="fixed", q=0)


def test_apply_unitary_rejects_non_unitary():
    from hybrid_mbqc.hybrid_engine import apply_unitary
    from hybrid_mbqc.spin_core import SpinAlgebraError

    with pytest.raises(SpinAlgebraError):
        apply_unitary(_pair(), "b", np.array([[1, 1], [0, 1]]))
