"""Dense Fock x grid reference simulator.

Stores the full amplitude tensor over ``(N+1)`` Fock levels per BEC and the
grid points per CV and applies every gate as an explicit matrix: the CZ as the
exponential of ``(N - S^z)/2 (x) x_hat`` on the (BEC, CV) pair, the Hadamard
as the exponential of ``S^y``, and BEC measurements as projections on the
dense basis vectors.  It shares no code path with the coherent-closure engine
beyond the operator definitions, and is only usable for small systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg

from .cv_core import GridSpec, GridWavefunction
from .graph_model import GraphSpec
from .hybrid_engine import PLUS, EngineError, MeasurementRecord, ZeroProbabilityError
from .spin_core import SpinCoherentParams, basis_vectors, coherent_to_fock, hadamard_unitary, spin_matrix

MAX_ENTRIES = 2**24


class OracleSizeError(EngineError):
    pass


@dataclass
class DenseHybridState:
    tensor: np.ndarray
    b_ids: list[str]
    c_ids: list[str]
    grids: dict[str, GridSpec]
    n_particles: dict[str, int]
    records: list[MeasurementRecord] = field(default_factory=list)

    def b_axis(self, b: str) -> int:
        try:
            return self.b_ids.index(b)
        except ValueError:
            raise EngineError(f"no live BEC {b!r} in the dense state") from None

    def c_axis(self, c: str) -> int:
        try:
            return len(self.b_ids) + self.c_ids.index(c)
        except ValueError:
            raise EngineError(f"no live CV {c!r} in the dense state") from None

    @property
    def cell(self) -> float:
        return float(np.prod([self.grids[c].dx for c in self.c_ids])) if self.c_ids else 1.0

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.tensor) ** 2) * self.cell))


def _size(n_particles: Mapping[str, int], grids: Mapping[str, GridSpec]) -> int:
    size = 1
    for n in n_particles.values():
        size *= n + 1
    for g in grids.values():
        size *= g.n_points
    return size


def dense_init(g: GraphSpec, n_particles: int, cv_inputs: Mapping[str, GridWavefunction],
               bec_inputs: Mapping[str, SpinCoherentParams] | None = None) -> DenseHybridState:
    bec_inputs = dict(bec_inputs or {})
    b_ids, c_ids = g.of_kind("B"), g.of_kind("C")
    for b in b_ids:
        bec_inputs.setdefault(b, SpinCoherentParams(*PLUS, n_particles))
    ns = {b: bec_inputs[b].n_particles for b in b_ids}
    grids = {c: cv_inputs[c].grid for c in c_ids}
    size = _size(ns, grids)
    if size > MAX_ENTRIES:
        raise OracleSizeError(f"dense tensor would hold {size} entries (limit {MAX_ENTRIES})")
    tensor = np.ones((), dtype=complex)
    for b in b_ids:
        tensor = np.multiply.outer(tensor, coherent_to_fock(bec_inputs[b]).amplitudes)
    for c in c_ids:
        tensor = np.multiply.outer(tensor, cv_inputs[c].amplitudes)
    return DenseHybridState(tensor, list(b_ids), list(c_ids), grids, ns)


def _apply_pair(state: DenseHybridState, matrix: np.ndarray, ax1: int, ax2: int):
    d1, d2 = state.tensor.shape[ax1], state.tensor.shape[ax2]
    m = matrix.reshape(d1, d2, d1, d2)
    out = np.tensordot(m, state.tensor, axes=([2, 3], [ax1, ax2]))
    state.tensor = np.moveaxis(out, [0, 1], [ax1, ax2])


def _apply_single(state: DenseHybridState, matrix: np.ndarray, ax: int):
    out = np.tensordot(matrix, state.tensor, axes=([1], [ax]))
    state.tensor = np.moveaxis(out, 0, ax)


def cz_generator(n_particles: int, grid: GridSpec) -> np.ndarray:
    """``n^b (x) x_hat`` with ``n^b = (N - S^z)/2``, on the (N+1)*n_points product space."""
    nb = (spin_matrix("number", n_particles).entries - spin_matrix("z", n_particles).entries) / 2
    return np.kron(nb, np.diag(grid.points).astype(complex))


def dense_cz(state: DenseHybridState, b: str, c: str, t: float) -> DenseHybridState:
    u = scipy.linalg.expm(-1j * t * cz_generator(state.n_particles[b], state.grids[c]))
    _apply_pair(state, u, state.b_axis(b), state.c_axis(c))
    return state


def dense_hadamard(state: DenseHybridState, b: str) -> DenseHybridState:
    _apply_single(state, hadamard_unitary(state.n_particles[b]).entries, state.b_axis(b))
    return state


def dense_bec_distribution(state: DenseHybridState, b: str, theta: float, big_l: int,
                           variant: str = "x_basis") -> tuple[np.ndarray, np.ndarray]:
    """Outcome probabilities and the projected (unnormalized) tensors, indexed by q."""
    vecs = basis_vectors(theta, big_l, state.n_particles[b], variant)
    ax = state.b_axis(b)
    proj = np.tensordot(vecs.conj().T, state.tensor, axes=([1], [ax]))
    probs = np.sum(np.abs(proj) ** 2, axis=tuple(range(1, proj.ndim))) * state.cell / state.norm**2
    return probs, proj


def dense_measure_bec(state: DenseHybridState, b: str, theta: float, big_l: int, q: int,
                      variant: str = "x_basis") -> DenseHybridState:
    probs, proj = dense_bec_distribution(state, b, theta, big_l, variant)
    if probs[q] < 1e-300:
        raise ZeroProbabilityError(f"outcome q={q} has probability {probs[q]:.3e}")
    state.tensor = proj[q]
    state.b_ids.remove(b)
    state.tensor = state.tensor / state.norm
    state.records.append(MeasurementRecord(b, "bec", q, probability=float(probs[q]), norm=state.norm,
                                           mode="fixed"))
    return state


def dense_marginal(state: DenseHybridState, c: str) -> np.ndarray:
    ax = state.c_axis(c)
    others = tuple(i for i in range(state.tensor.ndim) if i != ax)
    marg = np.sum(np.abs(state.tensor) ** 2, axis=others)
    return marg / (np.sum(marg) * state.grids[c].dx)


def dense_homodyne(state: DenseHybridState, c: str, x0: float) -> DenseHybridState:
    grid = state.grids[c]
    idx = grid.nearest_index(x0)
    p = dense_marginal(state, c)
    state.tensor = np.take(state.tensor, idx, axis=state.c_axis(c))
    state.c_ids.remove(c)
    state.tensor = state.tensor / state.norm
    state.records.append(MeasurementRecord(c, "homodyne", float(grid.points[idx]), density=float(p[idx]),
                                           norm=state.norm, mode="postselect"))
    return state


def dense_run_program(state: DenseHybridState, g: GraphSpec) -> DenseHybridState:
    for step in g.program():
        if step.op == "cz":
            dense_cz(state, step.vertex, step.partner, step.t)
        else:
            dense_hadamard(state, step.vertex)
    return state


def dense_oracle_run(g: GraphSpec, n_particles: int, cv_inputs: Mapping[str, GridWavefunction],
                     measurements: Sequence[dict],
                     bec_inputs: Mapping[str, SpinCoherentParams] | None = None) -> DenseHybridState:
    """Prepare ``g`` and apply ``measurements`` in order.

    Each measurement is ``{"action": "measure_bec", "vertex", "theta", "L", "q", "variant"}``
    or ``{"action": "homodyne_cv", "vertex", "x"}``; outcomes are always fixed so
    that runs can be compared branch by branch.
    """
    state = dense_init(g, n_particles, cv_inputs, bec_inputs)
    dense_run_program(state, g)
    for m in measurements:
        if m["action"] == "measure_bec":
            dense_measure_bec(state, m["vertex"], m["theta"], m["L"], m["q"], m.get("variant", "x_basis"))
        elif m["action"] == "homodyne_cv":
            dense_homodyne(state, m["vertex"], m["x"])
        else:
            raise EngineError(f"unknown action {m['action']!r}")
    return state


def phase_aligned_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max-abs difference between two normalized tensors after removing the global phase."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    overlap = np.vdot(a, b)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.max(np.abs(a * phase - b)))
