from __future__ import annotations

import numpy as np
import pytest

from hybrid_mbqc.cv_core import centered_grid, gaussian_wavefunction
from hybrid_mbqc.dense_oracle import (
    OracleSizeError,
    cz_generator,
    dense_cz,
    dense_init,
    dense_oracle_run,
    phase_aligned_distance,
)
from hybrid_mbqc.graph_model import chain_graph, z_rotation_graph
from hybrid_mbqc.hybrid_engine import apply_cz, init_state, to_dense
from hybrid_mbqc.protocols import oracle_cross_check


def _cv(center=0.0, n=32):
    return gaussian_wavefunction(centered_grid(center, 4.0, n), center, 0.5)


def test_cz_generator_is_diagonal():
    gen = cz_generator(3, centered_grid(0.0, 4.0, 16))
    assert np.allclose(gen, np.diag(np.diag(gen)))


@pytest.mark.parametrize("n", [1, 3, 5])
def test_single_cz_matches_engine(n):
    g = z_rotation_graph(30)
    sym = init_state(g, n, cv_inputs={"c2": _cv()}, run_program=False)
    sym = apply_cz(sym, "b1", "c2", 0.7)
    dense = dense_init(g, n, {"c2": _cv()})
    dense_cz(dense, "b1", "c2", 0.7)
    assert phase_aligned_distance(to_dense(sym, ["b1", "b3"], ["c2"]), dense.tensor) < 1e-12


def test_size_guard():
    g = chain_graph(5)
    big = gaussian_wavefunction(centered_grid(0.0, 4.0, 4096), 0.0, 0.5)
    with pytest.raises(OracleSizeError):
        dense_init(g, 60, {"c1": big, "c3": big})


def test_run_rejects_unknown_action():
    g = z_rotation_graph(30)
    with pytest.raises(Exception):
        dense_oracle_run(g, 2, {"c2": _cv()}, [{"action": "teleport"}])


def test_phase_aligned_distance():
    a = np.array([1, 1j]) / np.sqrt(2)
    assert phase_aligned_distance(a, a * np.exp(0.4j)) < 1e-15
    assert phase_aligned_distance(a, np.array([1, -1j]) / np.sqrt(2)) > 0.5


@pytest.mark.parametrize("protocol", ["z_rotation", "x_rotation", "arbitrary"])
@pytest.mark.parametrize("n", [1, 3, 6])
def test_cross_check(protocol, n):
    res = oracle_cross_check(protocol, n_particles=n)
    assert res["prep_state_error"] < 1e-9
    assert res["max_distribution_error"] < 1e-9
    assert res["max_state_error"] < 1e-9


@pytest.mark.parametrize("q", [0, 2, 4])
def test_cross_check_other_outcomes(q):
    res = oracle_cross_check("arbitrary", n_particles=4, q=q, theta=1.1, theta2=-0.7)
    assert max(res["max_distribution_error"], res["max_state_error"]) < 1e-9
