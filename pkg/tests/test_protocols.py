from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybrid_mbqc.protocols import (
    CSV_COLUMNS,
    ConfigError,
    ProtocolConfig,
    ProtocolError,
    SweepConfig,
    approx_diagnostics,
    composed_map,
    nominal_pair_comparison,
    params_from_dict,
    run_protocol,
    run_seed,
    summarize,
    sweep,
    sweep_threads,
    x_map,
    z_map,
)
from hybrid_mbqc.spin_core import check_unitary, hadamard_2x2

PLUS = np.array([1, 1]) / np.sqrt(2)


def _post(protocol, n, theta=0.3, theta2=0.0, **kw):
    return ProtocolConfig(protocol=protocol, theta=theta, theta2=theta2, n_particles=n, big_l=500,
                          homodyne_mode="postselect", grid_points=256, **kw)


@pytest.mark.parametrize("bad", [
    {"protocol": "y"}, {"n_particles": 0}, {"n_particles": 2.5}, {"big_l": 1}, {"grid_points": 4},
    {"theta": float("nan")}, {"homodyne_mode": "guess"}, {"bec_outcome_mode": "x"},
    {"envelope_sigma": -1.0}, {"seed": -3}, {"measurement_order": "middle"},
    {"fixed_q": 500, "n_particles": 10},
])
def test_config_validation(bad):
    with pytest.raises(ConfigError):
        ProtocolConfig(**bad)


def test_config_from_dict_strict():
    with pytest.raises(ConfigError) as info:
        ProtocolConfig.from_dict({"thetta": 1.0})
    assert info.value.key == "thetta"
    cfg = ProtocolConfig.from_dict({"protocol": "x", "theta": 0.2})
    assert cfg.protocol == "x_rotation"
    assert ProtocolConfig.from_dict(cfg.to_dict()) == cfg


def test_ideal_maps_are_unitary():
    for u in (z_map(0.4), x_map(0.4), composed_map(0.4, -1.2)):
        check_unitary(u)
    assert np.allclose(composed_map(0.4, 0.0), z_map(0.4))


@pytest.mark.parametrize("protocol", ["z_rotation", "x_rotation", "arbitrary"])
@pytest.mark.parametrize("n", [1, 10, 100])
def test_postselected_rotation_is_exact(protocol, n):
    rep = run_protocol(_post(protocol, n))
    assert abs(rep.output_phase + 0.3) < 1e-9
    assert rep.fidelity > 1 - 1e-9


@pytest.mark.parametrize("order", ["left_first", "right_first"])
@pytest.mark.parametrize("theta, theta2", [(0.3, 0.5), (-1.0, 0.8), (2.0, -0.4)])
def test_arbitrary_matches_composed_oracle(theta, theta2, order):
    rep = run_protocol(_post("arbitrary", 10, theta, theta2, measurement_order=order))
    out = params_from_dict(rep.frame_output_params)
    target = composed_map(theta, theta2) @ PLUS
    assert abs(abs(np.vdot(target, out.vector)) - 1) < 1e-9
    raw = params_from_dict(rep.output_params)
    assert abs(abs(np.vdot(hadamard_2x2() @ target, raw.vector)) - 1) < 1e-9


def test_x_rotation_nominal_comparison():
    rep = run_protocol(_post("x_rotation", 5, theta=0.3))
    assert rep.frame == "hadamard"
    assert rep.nominal_fidelity is not None and 0 <= rep.nominal_fidelity <= 1


def test_nominal_pair_comparison_shapes():
    res = nominal_pair_comparison(np.linspace(-1, 1, 21))
    assert res["per_point_fidelity"].shape == (21,)
    assert 0 < res["mean_fidelity"] <= 1
    assert res["best_scale_mean_fidelity"] >= res["mean_fidelity"] - 1e-12


def test_sample_mode_is_seeded():
    cfg = ProtocolConfig(theta=0.3, n_particles=20, grid_points=512, seed=7)
    a, b = run_protocol(cfg), run_protocol(cfg)
    assert a.records == b.records and a.fidelity == b.fidelity
    assert 0 <= a.fidelity <= 1


def test_expectation_mode_reports_width():
    rep = run_protocol(ProtocolConfig(n_particles=50, homodyne_mode="expectation", bec_outcome_mode="fixed",
                                      grid_points=1024))
    assert rep.output_params is None and rep.marginal_std > 0


def test_marginal_narrows_with_n():
    stds = []
    for n in (10, 40, 160):
        rep = run_protocol(ProtocolConfig(n_particles=n, homodyne_mode="expectation",
                                          bec_outcome_mode="fixed", grid_points=1024))
        stds.append(rep.marginal_std)
    assert stds[0] > stds[1] > stds[2]


def test_run_error_is_wrapped():
    # postselecting far outside the grid is an engine failure, reported with context
    cfg = ProtocolConfig(theta=0.0, envelope_center=1e6, n_particles=4, homodyne_mode="postselect",
                         grid_points=64, envelope_sigma=1.0)
    with pytest.raises((ProtocolError, ValueError)):
        run_protocol(cfg)


@pytest.mark.parametrize("n", [10, 100, 1000])
def test_approx_diagnostics(n):
    rep = approx_diagnostics(ProtocolConfig(n_particles=n))
    assert rep.fitted_width == pytest.approx(rep.exact_width, rel=0.05)
    assert rep.predicted_width == pytest.approx(rep.exact_width * np.sqrt(2))
    assert len(rep.table()) == 401


@pytest.mark.parametrize("n", [10, 50, 250])
def test_fitted_width_scaling(n):
    w1 = approx_diagnostics(ProtocolConfig(n_particles=n)).fitted_width
    w4 = approx_diagnostics(ProtocolConfig(n_particles=4 * n)).fitted_width
    assert w4 / w1 == pytest.approx(0.5, rel=0.1)


def test_run_seed_independent_streams():
    seeds = {run_seed(0, p, r) for p in range(5) for r in range(5)}
    assert len(seeds) == 25
    assert run_seed(3, 1, 2) == run_seed(3, 1, 2)


def _small_sweep(**kw):
    base = ProtocolConfig(grid_points=256)
    return SweepConfig(base, (4, 8), (100,), (0.0, 0.4), runs_per_point=2, master_seed=11, **kw)


def test_sweep_thread_count_invariant():
    cfg = _small_sweep()
    one, many = sweep(cfg, threads=1), sweep(cfg, threads=4)
    assert one == many
    assert len(one) == 8 and set(one[0]) == set(CSV_COLUMNS)
    assert all(r["status"] == "ok" for r in one)


def test_sweep_failed_point_keeps_row():
    base = ProtocolConfig(grid_points=64, envelope_center=1e6, envelope_sigma=1.0, homodyne_mode="postselect")
    rows = sweep(SweepConfig(base, (4,), (100,), (0.0,)), threads=1)
    assert rows[0]["status"].startswith("error")


def test_summarize():
    rows = [{"N": 1, "L": 2, "theta": 0.0, "fidelity": f, "status": "ok"} for f in (0.2, 0.4)]
    rows.append({"N": 1, "L": 2, "theta": 0.0, "fidelity": "", "status": "error: x"})
    (s,) = summarize(rows)
    assert s["runs"] == 2 and s["mean_fidelity"] == pytest.approx(0.3)
    assert s["sem"] == pytest.approx(0.1)


def test_sweep_config_validation(monkeypatch):
    with pytest.raises(ConfigError):
        SweepConfig(ProtocolConfig(), (), (100,), (0.0,))
    with pytest.raises(ConfigError):
        SweepConfig(ProtocolConfig(), (4,), (100,), (0.0,), runs_per_point=0)
    monkeypatch.setenv("HYBRID_SIM_THREADS", "3")
    assert sweep_threads() == 3
    monkeypatch.setenv("HYBRID_SIM_THREADS", "many")
    with pytest.raises(ConfigError):
        sweep_threads()


@settings(max_examples=15)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(1, 60))
def test_postselect_property(theta, theta2, n):
    rep = run_protocol(_post("arbitrary", n, theta, theta2))
    assert rep.fidelity > 1 - 1e-9
