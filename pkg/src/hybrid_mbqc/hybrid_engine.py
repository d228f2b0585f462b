"""Coherent-closure simulator for hybrid BEC/CV graph states.

A state is a grid superposition of product coherent states,

    sum over grid tuples  w(x_1, ..., x_m) |x_1 ... x_m>  (x)_b |alpha_b(x), beta_b(x)>>,

with at most two live CV axes.  CZ gates and Hadamards act pointwise on the
coherent pairs, so each BEC register is stored as a short program of 2x2
operations (phases tied to an axis, or fixed unitaries) and evaluated lazily
over the axes it depends on.  Measuring a BEC multiplies the weight by its
closed-form outcome amplitude and drops the register; homodyning a CV pins its
coordinate and turns every phase tied to it into a fixed unitary.  Nothing in
this module is approximated in N.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal, Mapping

import numpy as np

from .cv_core import GridSpec, GridWavefunction, default_grid, default_sigma, gaussian_wavefunction
from .graph_model import GraphSpec, validate_topology
from .spin_core import (
    BasisVariant,
    SpinCoherentParams,
    basis_amplitudes,
    check_unitary,
    coherent_overlap_array,
    hadamard_2x2,
    phase_2x2,
)

MAX_LIVE_AXES = 2
ZERO_PROBABILITY = 1e-300

PLUS = (1 / np.sqrt(2), 1 / np.sqrt(2))


class EngineError(RuntimeError):
    pass


class CapacityError(EngineError):
    pass


class ZeroProbabilityError(EngineError):
    pass


@dataclass(frozen=True)
class Register:
    """Coherent pair ``u_k ... u_1 (alpha0, beta0)`` with axis-dependent phase factors."""

    alpha0: complex
    beta0: complex
    n_particles: int
    ops: tuple = ()

    def with_op(self, op) -> Register:
        return replace(self, ops=self.ops + (op,))

    def axes(self) -> set[str]:
        return {op[1] for op in self.ops if op[0] == "phase"}


@dataclass(frozen=True)
class MeasurementRecord:
    vertex: str
    kind: Literal["bec", "homodyne"]
    outcome: float
    probability: float | None = None
    density: float | None = None
    norm: float = 1.0
    mode: str = ""
    marginal_mean: float | None = None
    marginal_std: float | None = None

    def to_dict(self) -> dict:
        out = {"vertex": self.vertex, "kind": self.kind, "outcome": self.outcome, "mode": self.mode,
               "post_measurement_norm": self.norm}
        if self.kind == "bec":
            out["probability"] = self.probability
        else:
            out["density"] = self.density
            out["marginal_mean"] = self.marginal_mean
            out["marginal_std"] = self.marginal_std
        return out


@dataclass(frozen=True)
class SymbolicHybridState:
    cv_axes: tuple[tuple[str, GridSpec], ...]
    weight: np.ndarray
    bec_registers: Mapping[str, Register]
    scalar_log_norm: float = 0.0
    pinned: Mapping[str, float] = field(default_factory=dict)
    kinds: Mapping[str, str] = field(default_factory=dict)

    # -- axis bookkeeping -------------------------------------------------
    @property
    def axis_ids(self) -> list[str]:
        return [c for c, _ in self.cv_axes]

    def axis_index(self, c: str) -> int:
        for i, (cid, _) in enumerate(self.cv_axes):
            if cid == c:
                return i
        if c in self.pinned:
            raise EngineError(f"CV axis {c!r} has already been homodyned")
        raise EngineError(f"no live CV axis {c!r}")

    def grid(self, c: str) -> GridSpec:
        return self.cv_axes[self.axis_index(c)][1]

    @property
    def cell(self) -> float:
        """Volume element ``prod dx`` of the live axes."""
        return float(np.prod([g.dx for _, g in self.cv_axes])) if self.cv_axes else 1.0

    def _axis_values(self, c: str) -> np.ndarray:
        i = self.axis_index(c)
        shape = [1] * len(self.cv_axes)
        shape[i] = self.cv_axes[i][1].n_points
        return self.cv_axes[i][1].points.reshape(shape)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.weight) ** 2) * self.cell))

    # -- register evaluation ---------------------------------------------
    def register(self, b: str) -> Register:
        try:
            return self.bec_registers[b]
        except KeyError:
            raise EngineError(f"no live BEC register {b!r}") from None

    def fields(self, b: str) -> tuple[np.ndarray, np.ndarray]:
        """``(alpha(x), beta(x))`` broadcastable against the weight array."""
        reg = self.register(b)
        ones = (1,) * len(self.cv_axes)
        alpha = np.full(ones, reg.alpha0, dtype=complex)
        beta = np.full(ones, reg.beta0, dtype=complex)
        for op in reg.ops:
            if op[0] == "phase":
                beta = beta * np.exp(-1j * op[2] * self._axis_values(op[1]))
            else:
                u = op[1]
                alpha, beta = u[0, 0] * alpha + u[0, 1] * beta, u[1, 0] * alpha + u[1, 1] * beta
        return alpha, beta

    def coherent_params(self, b: str) -> SpinCoherentParams:
        """Coherent pair of a register that no longer depends on a live axis."""
        reg = self.register(b)
        live = reg.axes() & set(self.axis_ids)
        if live:
            raise EngineError(f"register {b!r} is still entangled with CV axes {sorted(live)}")
        alpha, beta = self.fields(b)
        return SpinCoherentParams(alpha.item(), beta.item(), reg.n_particles)

    def _density_over(self, dims: tuple[int, ...]) -> np.ndarray:
        """``|w|^2 prod dx`` summed over the axes in ``dims`` (kept as size 1)."""
        dens = np.abs(self.weight) ** 2 * self.cell
        return dens.sum(axis=dims, keepdims=True) if dims else dens


# ---------------------------------------------------------------------------
# construction and gates
# ---------------------------------------------------------------------------


def product_state(bec_inputs: Mapping[str, SpinCoherentParams],
                  cv_inputs: Mapping[str, GridWavefunction],
                  kinds: Mapping[str, str] | None = None) -> SymbolicHybridState:
    if len(cv_inputs) > MAX_LIVE_AXES:
        raise CapacityError(f"{len(cv_inputs)} CV axes requested; the engine holds at most {MAX_LIVE_AXES}")
    axes = tuple((c, wf.grid) for c, wf in cv_inputs.items())
    weight = np.ones((), dtype=complex)
    for wf in cv_inputs.values():
        weight = np.multiply.outer(weight, wf.amplitudes)
    regs = {}
    for b, p in bec_inputs.items():
        if not p.is_normalized(1e-10):
            raise EngineError(f"input for BEC {b!r} is not normalized")
        regs[b] = Register(p.alpha, p.beta, p.n_particles)
    if kinds is None:
        kinds = {**{b: "B" for b in bec_inputs}, **{c: "C" for c in cv_inputs}}
    return SymbolicHybridState(axes, np.asarray(weight, dtype=complex), regs, 0.0, {}, dict(kinds))


def default_cv_input(center: float = 0.0, big_l: float = 500, sigma: float | None = None,
                     n_points: int = 2048) -> GridWavefunction:
    sigma = default_sigma(big_l) if sigma is None else sigma
    return gaussian_wavefunction(default_grid(center, sigma, n_points), center, sigma)


def init_state(g: GraphSpec, n_particles: int = 1,
               bec_inputs: Mapping[str, SpinCoherentParams] | None = None,
               cv_inputs: Mapping[str, GridWavefunction] | None = None,
               run_program: bool = True) -> SymbolicHybridState:
    """Product input state followed by the graph's preparation program."""
    report = validate_topology(g)
    if not report.ok:
        raise EngineError("graph is not topology-valid: " + "; ".join(v.message for v in report.violations))
    bec_inputs = dict(bec_inputs or {})
    cv_inputs = dict(cv_inputs or {})
    for b in g.of_kind("B"):
        bec_inputs.setdefault(b, SpinCoherentParams(*PLUS, n_particles))
    for c in g.of_kind("C"):
        if c not in cv_inputs:
            cv_inputs[c] = default_cv_input(0.0, g.magic_l or 500)
    state = product_state({b: bec_inputs[b] for b in g.of_kind("B")},
                          {c: cv_inputs[c] for c in g.of_kind("C")}, g.kinds)
    if run_program:
        state = run_preparation(state, g)
    return state


def run_preparation(state: SymbolicHybridState, g: GraphSpec) -> SymbolicHybridState:
    for step in g.program():
        if step.op == "cz":
            state = apply_cz(state, step.vertex, step.partner, step.t)
        else:
            state = apply_hadamard(state, step.vertex)
    return state


def _check_kind(state: SymbolicHybridState, v: str, kind: str):
    if state.kinds.get(v, kind) != kind:
        raise EngineError(f"vertex {v!r} is not of kind {kind}")


def apply_cz(state: SymbolicHybridState, b: str, c: str, t: float) -> SymbolicHybridState:
    """``exp(-i t n^b x_c)``: multiplies ``beta_b`` by ``exp(-i t x_c)`` at every grid point."""
    _check_kind(state, b, "B")
    _check_kind(state, c, "C")
    state.axis_index(c)
    reg = state.register(b)
    if t == 0:
        return state
    regs = dict(state.bec_registers)
    regs[b] = reg.with_op(("phase", c, float(t)))
    return replace(state, bec_registers=regs)


def apply_unitary(state: SymbolicHybridState, b: str, u: np.ndarray) -> SymbolicHybridState:
    _check_kind(state, b, "B")
    regs = dict(state.bec_registers)
    # a non-unitary op would break the coherent-closure invariant
    regs[b] = state.register(b).with_op(("u", check_unitary(u)))
    return replace(state, bec_registers=regs)


def apply_hadamard(state: SymbolicHybridState, b: str) -> SymbolicHybridState:
    return apply_unitary(state, b, hadamard_2x2())


# ---------------------------------------------------------------------------
# measurements
# ---------------------------------------------------------------------------


def _outcome_amplitudes(state, b, theta, big_l, variant):
    alpha, beta = state.fields(b)
    n = state.register(b).n_particles
    amps = basis_amplitudes(alpha, beta, n, theta, big_l, variant)
    # sum the weight density over the axes this register does not depend on
    dims = tuple(i for i, s in enumerate(np.broadcast_shapes(alpha.shape, beta.shape)) if s == 1)
    return amps, state._density_over(dims)


def bec_outcome_distribution(state: SymbolicHybridState, b: str, theta: float, big_l: int,
                             variant: BasisVariant = "x_basis") -> np.ndarray:
    """``P(q) = sum |w|^2 |<theta_q|alpha_b(x), beta_b(x)>>|^2 prod dx`` for q = 0..N."""
    amps, dens = _outcome_amplitudes(state, b, theta, big_l, variant)
    p = (np.abs(amps) ** 2 * dens[None]).reshape(amps.shape[0], -1).sum(axis=1)
    return p / (state.norm**2)


def measure_bec(state: SymbolicHybridState, b: str, theta: float, big_l: int,
                variant: BasisVariant = "x_basis", mode: str = "sample", q: int | None = None,
                rng: np.random.Generator | None = None) -> tuple[MeasurementRecord, SymbolicHybridState]:
    """Projective BEC measurement; ``mode`` is ``"sample"`` (needs ``rng``) or ``"fixed"`` (needs ``q``)."""
    amps, dens = _outcome_amplitudes(state, b, theta, big_l, variant)
    probs = (np.abs(amps) ** 2 * dens[None]).reshape(amps.shape[0], -1).sum(axis=1) / state.norm**2
    if mode == "sample":
        if rng is None:
            raise EngineError("sample mode needs an rng")
        q = int(rng.choice(len(probs), p=probs / probs.sum()))
    elif mode == "fixed":
        if q is None or not 0 <= q < len(probs):
            raise EngineError(f"fixed mode needs an outcome q in 0..{len(probs) - 1}, got {q!r}")
    else:
        raise EngineError(f"unknown BEC measurement mode {mode!r}")
    pq = float(probs[q])
    if pq < ZERO_PROBABILITY:
        raise ZeroProbabilityError(f"outcome q={q} of BEC {b!r} has probability {pq:.3e}")
    weight = state.weight * amps[q]
    norm = float(np.sqrt(np.sum(np.abs(weight) ** 2) * state.cell))
    regs = {k: v for k, v in state.bec_registers.items() if k != b}
    new = replace(state, weight=weight / norm, bec_registers=regs,
                  scalar_log_norm=state.scalar_log_norm + float(np.log(norm)))
    return MeasurementRecord(b, "bec", q, probability=pq, norm=new.norm, mode=mode), new


def homodyne_marginal(state: SymbolicHybridState, c: str) -> np.ndarray:
    """Probability density ``p(x_c)`` on the grid of axis ``c``."""
    i = state.axis_index(c)
    others = tuple(j for j in range(len(state.cv_axes)) if j != i)
    dens = np.abs(state.weight) ** 2
    marg = dens.sum(axis=others) if others else dens
    other_cell = float(np.prod([state.cv_axes[j][1].dx for j in others])) if others else 1.0
    marg = marg * other_cell
    return marg / (np.sum(marg) * state.cv_axes[i][1].dx)


def marginal_stats(state: SymbolicHybridState, c: str) -> tuple[float, float]:
    grid = state.grid(c)
    p = homodyne_marginal(state, c) * grid.dx
    x = grid.points
    mean = float(np.sum(p * x))
    return mean, float(np.sqrt(max(np.sum(p * (x - mean) ** 2), 0.0)))


def homodyne_cv(state: SymbolicHybridState, c: str, mode: str = "sample", x0: float | None = None,
                rng: np.random.Generator | None = None) -> tuple[MeasurementRecord, SymbolicHybridState]:
    """Position measurement of CV axis ``c``.

    ``sample`` draws a grid point from the marginal, ``postselect`` pins the
    grid point nearest ``x0``.  ``expectation`` only reports the marginal's
    mean and width and returns the state unchanged, so that ``fidelity``
    averages over the marginal instead of committing to one outcome.
    """
    grid = state.grid(c)
    i = state.axis_index(c)
    p = homodyne_marginal(state, c)
    mean, std = marginal_stats(state, c)
    if mode == "expectation":
        return MeasurementRecord(c, "homodyne", mean, density=None, norm=state.norm, mode=mode,
                                 marginal_mean=mean, marginal_std=std), state
    if mode == "sample":
        if rng is None:
            raise EngineError("sample mode needs an rng")
        pm = p * grid.dx
        idx = int(rng.choice(grid.n_points, p=pm / pm.sum()))
    elif mode == "postselect":
        if x0 is None:
            raise EngineError("postselect mode needs x0")
        idx = grid.nearest_index(x0)
    else:
        raise EngineError(f"unknown homodyne mode {mode!r}")
    if p[idx] <= 0:
        raise ZeroProbabilityError(f"homodyne outcome x={grid.points[idx]} of {c!r} has zero density")
    x_val = float(grid.points[idx])
    weight = np.take(state.weight, idx, axis=i)
    axes = tuple(a for a in state.cv_axes if a[0] != c)
    regs = {}
    for b, reg in state.bec_registers.items():
        ops = tuple(("u", phase_2x2(op[2] * x_val)) if op[0] == "phase" and op[1] == c else op for op in reg.ops)
        regs[b] = replace(reg, ops=ops)
    cell = float(np.prod([g.dx for _, g in axes])) if axes else 1.0
    norm = float(np.sqrt(np.sum(np.abs(weight) ** 2) * cell))
    new = SymbolicHybridState(axes, weight / norm, regs, state.scalar_log_norm + float(np.log(norm)),
                              {**state.pinned, c: x_val}, state.kinds)
    rec = MeasurementRecord(c, "homodyne", x_val, density=float(p[idx]), norm=new.norm, mode=mode,
                            marginal_mean=mean, marginal_std=std)
    return rec, new


def fidelity(state: SymbolicHybridState, b: str, target: SpinCoherentParams) -> float:
    """``|<<out|target>>|^2``, averaged over ``|w|^2`` if the register still depends on live axes."""
    alpha, beta = state.fields(b)
    n = state.register(b).n_particles
    if n != target.n_particles:
        raise EngineError(f"target has N={target.n_particles}, register has N={n}")
    fid = np.abs(coherent_overlap_array(alpha, beta, target.alpha, target.beta, n)) ** 2
    if fid.size == 1 or not state.cv_axes:
        return float(np.clip(fid.reshape(-1)[0], 0.0, 1.0))
    dens = np.abs(state.weight) ** 2 * state.cell
    return float(np.clip(np.sum(dens * fid) / np.sum(dens), 0.0, 1.0))


def register_norm_error(state: SymbolicHybridState) -> float:
    """Largest pointwise deviation of ``|alpha|^2 + |beta|^2`` from 1 over all registers."""
    err = 0.0
    for b in state.bec_registers:
        alpha, beta = state.fields(b)
        err = max(err, float(np.max(np.abs(np.abs(alpha) ** 2 + np.abs(beta) ** 2 - 1.0))))
    return err


def to_dense(state: SymbolicHybridState, b_order=None, c_order=None) -> np.ndarray:
    """Expand into a full tensor over ``(N+1)`` per BEC and the grid points per CV.

    Axis order is ``b_order`` followed by ``c_order`` (default: insertion order).
    Only meant for small N and grids.
    """
    from .spin_core import fock_amplitudes

    b_order = list(state.bec_registers) if b_order is None else list(b_order)
    c_order = state.axis_ids if c_order is None else list(c_order)
    perm = [state.axis_index(c) for c in c_order]
    weight = np.transpose(state.weight, perm) if perm else state.weight
    tensor = weight
    for b in reversed(b_order):
        alpha, beta = state.fields(b)
        shape = np.broadcast_shapes(alpha.shape, beta.shape, state.weight.shape)
        alpha = np.broadcast_to(alpha, shape)
        beta = np.broadcast_to(beta, shape)
        fock = fock_amplitudes(alpha, beta, state.register(b).n_particles)
        fock = np.transpose(fock, [0] + [1 + p for p in perm]) if perm else fock
        # tensor has the b axes already placed in front of the grid axes
        n_front = tensor.ndim - len(c_order)
        fock = fock.reshape(fock.shape[:1] + (1,) * n_front + fock.shape[1:])
        tensor = fock * tensor[None]
    return tensor
