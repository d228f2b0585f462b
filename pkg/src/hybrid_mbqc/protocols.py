"""Measurement-driven rotation protocols, parameter sweeps and approximation diagnostics."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Literal

import numpy as np
from scipy.optimize import curve_fit

from .cv_core import default_grid, default_sigma, gaussian_wavefunction
from .graph_model import (
    GraphSpec,
    arbitrary_rotation_graph,
    plan_from_pairs,
    validate_plan,
    x_rotation_graph,
    z_rotation_graph,
)
from .hybrid_engine import (
    PLUS,
    EngineError,
    fidelity,
    homodyne_cv,
    init_state,
    measure_bec,
)
from .spin_core import SpinCoherentParams, coherent_overlap, hadamard_2x2, phase_2x2

ProtocolName = Literal["z_rotation", "x_rotation", "arbitrary"]
PROTOCOLS = ("z_rotation", "x_rotation", "arbitrary")
ALIASES = {"z": "z_rotation", "x": "x_rotation", "arb": "arbitrary", "arbitrary_rotation": "arbitrary"}

CSV_COLUMNS = ("protocol", "N", "L", "theta", "theta2", "seed", "q_outcome", "x_outcome", "prob_q",
               "fidelity", "marginal_std", "status")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class ProtocolError(RuntimeError):
    pass


@dataclass(frozen=True)
class ProtocolConfig:
    protocol: str = "z_rotation"
    theta: float = 0.0
    theta2: float = 0.0
    n_particles: int = 100
    big_l: int = 500
    envelope_center: float | None = None
    envelope_sigma: float | None = None
    grid_points: int = 2048
    grid_half_width: float = 8.0
    bec_outcome_mode: str = "sample"
    fixed_q: int | None = None
    homodyne_mode: str = "sample"
    seed: int = 0
    measurement_order: str = "left_first"

    def __post_init__(self):
        proto = ALIASES.get(self.protocol, self.protocol)
        object.__setattr__(self, "protocol", proto)
        if proto not in PROTOCOLS:
            raise ConfigError("protocol", f"must be one of {PROTOCOLS}, got {self.protocol!r}")
        for key in ("n_particles", "big_l", "grid_points", "seed"):
            val = getattr(self, key)
            if isinstance(val, bool) or not isinstance(val, (int, np.integer)):
                raise ConfigError(key, f"must be an integer, got {val!r}")
        if self.n_particles < 1:
            raise ConfigError("n_particles", f"must be >= 1, got {self.n_particles}")
        if self.big_l < 2:
            raise ConfigError("big_l", f"must be >= 2, got {self.big_l}")
        if self.grid_points < 8:
            raise ConfigError("grid_points", f"must be >= 8, got {self.grid_points}")
        if self.seed < 0:
            raise ConfigError("seed", f"must be non-negative, got {self.seed}")
        for key in ("theta", "theta2", "grid_half_width"):
            val = getattr(self, key)
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not np.isfinite(val):
                raise ConfigError(key, f"must be a finite number, got {val!r}")
        if self.grid_half_width <= 0:
            raise ConfigError("grid_half_width", "must be positive")
        if self.envelope_sigma is not None and not self.envelope_sigma > 0:
            raise ConfigError("envelope_sigma", f"must be positive, got {self.envelope_sigma}")
        if self.bec_outcome_mode not in ("sample", "fixed"):
            raise ConfigError("bec_outcome_mode", f"must be 'sample' or 'fixed', got {self.bec_outcome_mode!r}")
        if self.fixed_q is not None and not 0 <= self.fixed_q <= self.n_particles:
            raise ConfigError("fixed_q", f"must lie in 0..{self.n_particles}, got {self.fixed_q}")
        if self.homodyne_mode not in ("sample", "postselect", "expectation"):
            raise ConfigError("homodyne_mode",
                              f"must be 'sample', 'postselect' or 'expectation', got {self.homodyne_mode!r}")
        if self.measurement_order not in ("left_first", "right_first"):
            raise ConfigError("measurement_order", f"must be 'left_first' or 'right_first'")

    @property
    def sigma(self) -> float:
        return default_sigma(self.big_l) if self.envelope_sigma is None else float(self.envelope_sigma)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> ProtocolConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown configuration key")
        return cls(**doc)


@dataclass
class ProtocolReport:
    protocol: str
    records: list[dict]
    output_params: dict | None
    frame_output_params: dict | None
    target_params: dict
    fidelity: float
    output_phase: float | None
    marginal_mean: float | None
    marginal_std: float | None
    approx: dict | None
    config: dict
    frame: str = "computational"
    nominal_params: dict | None = None
    nominal_fidelity: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _params_dict(p: SpinCoherentParams | None) -> dict | None:
    if p is None:
        return None
    return {"alpha": [p.alpha.real, p.alpha.imag], "beta": [p.beta.real, p.beta.imag],
            "n_particles": p.n_particles}


def params_from_dict(d: dict) -> SpinCoherentParams:
    return SpinCoherentParams(complex(*d["alpha"]), complex(*d["beta"]), d["n_particles"])


def _envelope(cfg: ProtocolConfig, center: float):
    sigma = cfg.sigma
    grid = default_grid(center, sigma, cfg.grid_points, cfg.grid_half_width)
    return gaussian_wavefunction(grid, center, sigma)


# ---------------------------------------------------------------------------
# ideal maps
# ---------------------------------------------------------------------------


def z_map(theta: float) -> np.ndarray:
    """Single-particle map of the postselected z protocol."""
    return phase_2x2(theta)


def x_map(theta: float) -> np.ndarray:
    """``H^dag diag(1, e^{-i theta}) H``: the z map seen through the BEC Hadamard."""
    h = hadamard_2x2()
    return h.conj().T @ phase_2x2(theta) @ h


def composed_map(theta: float, theta2: float) -> np.ndarray:
    """Arbitrary-rotation target: the z map by ``theta`` followed by the x map by ``theta2``."""
    return x_map(theta2) @ z_map(theta)


def _apply(u: np.ndarray, p: SpinCoherentParams) -> SpinCoherentParams:
    return SpinCoherentParams.from_vector(u @ p.vector, p.n_particles)


# ---------------------------------------------------------------------------
# protocol runs
# ---------------------------------------------------------------------------


def _measure_pair(state, cfg, rng, b, c, theta, records):
    q = None
    if cfg.bec_outcome_mode == "fixed":
        q = cfg.n_particles // 2 if cfg.fixed_q is None else cfg.fixed_q
    rec, state = measure_bec(state, b, theta, cfg.big_l, "x_basis", cfg.bec_outcome_mode, q=q, rng=rng)
    records.append(rec)
    rec, state = homodyne_cv(state, c, cfg.homodyne_mode, x0=theta, rng=rng)
    records.append(rec)
    return state


def _finish(cfg, graph, state, records, output, target, frame_fix, frame, nominal=None) -> ProtocolReport:
    fid = fidelity(state, output, target)
    out = frame_out = None
    phase = None
    if cfg.homodyne_mode != "expectation":
        out = state.coherent_params(output)
        frame_out = _apply(frame_fix, out)
        phase = frame_out.relative_phase
    homodynes = [r for r in records if r.kind == "homodyne"]
    report = ProtocolReport(
        protocol=cfg.protocol,
        records=[r.to_dict() for r in records],
        output_params=_params_dict(out),
        frame_output_params=_params_dict(frame_out),
        target_params=_params_dict(target),
        fidelity=fid,
        output_phase=phase,
        marginal_mean=homodynes[0].marginal_mean if homodynes else None,
        marginal_std=homodynes[0].marginal_std if homodynes else None,
        approx=approx_diagnostics(cfg).summary(),
        config=cfg.to_dict(),
        frame=frame,
    )
    if nominal is not None:
        report.nominal_params = _params_dict(nominal)
        report.nominal_fidelity = float(abs(coherent_overlap(nominal, target)) ** 2)
    return report


def run_z_rotation(cfg: ProtocolConfig) -> ProtocolReport:
    """Output ``b1`` of the chain ``b1 - c2 - b3`` after measuring ``b3`` and homodyning ``c2``."""
    cfg = replace(cfg, protocol="z_rotation")
    return _run_single_axis(cfg, z_rotation_graph(cfg.big_l), np.eye(2), "computational")


def run_x_rotation(cfg: ProtocolConfig) -> ProtocolReport:
    """Same chain with a Hadamard on ``b1`` after its CZ.

    The raw output lives in the Hadamard frame; ``frame_output_params`` undoes
    that Hadamard.  ``nominal_params`` holds the ``(cos theta, i sin theta)``
    pair that the naive composition would suggest, for comparison only.
    """
    cfg = replace(cfg, protocol="x_rotation")
    h = hadamard_2x2()
    nominal = SpinCoherentParams(np.cos(cfg.theta), 1j * np.sin(cfg.theta), cfg.n_particles)
    return _run_single_axis(cfg, x_rotation_graph(cfg.big_l), h.conj().T, "hadamard", nominal)


def _run_single_axis(cfg, graph, frame_fix, frame, nominal=None) -> ProtocolReport:
    rng = np.random.default_rng(cfg.seed)
    center = cfg.theta if cfg.envelope_center is None else cfg.envelope_center
    plan = plan_from_pairs([("b3", "c2")], ["b1"])
    _check_plan(graph, plan)
    state = init_state(graph, cfg.n_particles, cv_inputs={"c2": _envelope(cfg, center)})
    records = []
    state = _measure_pair(state, cfg, rng, "b3", "c2", cfg.theta, records)
    ideal = z_map(cfg.theta)
    if frame == "hadamard":
        ideal = hadamard_2x2() @ ideal
    target = _apply(ideal, SpinCoherentParams(*PLUS, cfg.n_particles))
    return _finish(cfg, graph, state, records, "b1", target, frame_fix, frame, nominal)


def run_arbitrary_rotation(cfg: ProtocolConfig) -> ProtocolReport:
    """Centre output ``b0`` of ``bl - c1 - b0 - c2 - br`` with a Hadamard on ``b0`` mid-preparation.

    The raw output carries that Hadamard as a fixed byproduct;
    ``frame_output_params`` removes it so the result can be compared with
    ``composed_map(theta, theta2)`` acting on ``|+>``.
    """
    cfg = replace(cfg, protocol="arbitrary")
    graph = arbitrary_rotation_graph(cfg.big_l)
    rng = np.random.default_rng(cfg.seed)
    c1 = cfg.theta if cfg.envelope_center is None else cfg.envelope_center
    c2 = cfg.theta2 if cfg.envelope_center is None else cfg.envelope_center
    pairs = [("bl", "c1", cfg.theta), ("br", "c2", cfg.theta2)]
    if cfg.measurement_order == "right_first":
        pairs.reverse()
    plan = plan_from_pairs([(b, c) for b, c, _ in pairs], ["b0"])
    _check_plan(graph, plan)
    state = init_state(graph, cfg.n_particles, cv_inputs={"c1": _envelope(cfg, c1), "c2": _envelope(cfg, c2)})
    records = []
    for b, c, theta in pairs:
        state = _measure_pair(state, cfg, rng, b, c, theta, records)
    h = hadamard_2x2()
    target = _apply(h @ composed_map(cfg.theta, cfg.theta2), SpinCoherentParams(*PLUS, cfg.n_particles))
    report = _finish(cfg, graph, state, records, "b0", target, h.conj().T, "hadamard_byproduct")
    return report


def _check_plan(graph: GraphSpec, plan):
    report = validate_plan(graph, plan)
    if not report.ok:
        raise ProtocolError("measurement plan violates graph rules: "
                            + "; ".join(v.message for v in report.violations))


def run_protocol(cfg: ProtocolConfig) -> ProtocolReport:
    runner = {"z_rotation": run_z_rotation, "x_rotation": run_x_rotation,
              "arbitrary": run_arbitrary_rotation}[cfg.protocol]
    try:
        return runner(cfg)
    except EngineError as exc:
        raise ProtocolError(f"{cfg.protocol} run failed (N={cfg.n_particles}, L={cfg.big_l}, "
                            f"theta={cfg.theta}, seed={cfg.seed}): {exc}") from exc


# ---------------------------------------------------------------------------
# approximation diagnostics
# ---------------------------------------------------------------------------


@dataclass
class ApproxReport:
    n_particles: int
    big_l: int
    theta: float
    x_minus_theta: np.ndarray
    log_exact: np.ndarray
    log_surrogate: np.ndarray
    rel_error: np.ndarray
    fitted_width: float
    predicted_width: float
    exact_width: float
    max_rel_error_valid: float
    validity_u: float = 0.1
    table_note: str = field(default="log of (cos u - sin u)^N and exp(-uN - u^2 N/2), u = pi (x - theta)/L")

    @property
    def exact(self) -> np.ndarray:
        return np.exp(self.log_exact)

    @property
    def surrogate(self) -> np.ndarray:
        return np.exp(self.log_surrogate)

    def summary(self) -> dict:
        return {
            "fitted_width": self.fitted_width,
            "predicted_width": self.predicted_width,
            "exact_width": self.exact_width,
            "max_rel_error_valid": self.max_rel_error_valid,
            "validity_u": self.validity_u,
        }

    def table(self) -> list[dict]:
        return [{"x_minus_theta": float(d), "log_exact": float(le), "log_surrogate": float(ls),
                 "rel_error": float(r)}
                for d, le, ls, r in zip(self.x_minus_theta, self.log_exact, self.log_surrogate, self.rel_error)]


def _gauss(d, amp, width):
    return amp * np.exp(-(d**2) / (2 * width**2))


def approx_diagnostics(cfg: ProtocolConfig, n_table: int = 401, validity_u: float = 0.1) -> ApproxReport:
    """Compare the exact N-th power factor with its exponential surrogate.

    With ``u = pi (x - theta) / L`` the exact factor is
    ``(cos u - sin u)^N = 2^(N/2) cos^N(u + pi/4)`` and the surrogate is
    ``exp(-u N - u^2 N / 2)``.  The Gaussian width is fitted to the exact factor
    with its linear tilt ``exp(-u N)`` divided out, and reported in units of x
    next to the surrogate's ``L / (pi sqrt(N))``.
    """
    n, big_l = cfg.n_particles, cfg.big_l
    u_max = 0.98 * np.pi / 4
    u = np.linspace(-u_max, u_max, n_table)
    log_exact = n * np.log(np.cos(u) - np.sin(u))
    log_surr = -u * n - u**2 * n / 2
    rel = np.abs(np.expm1(log_exact - log_surr))
    valid = np.abs(u) < validity_u
    d = u * big_l / np.pi

    # tilt-removed envelope, fitted over the region above 1e-4 of its peak
    fit_u = np.linspace(-u_max, u_max, 4001)
    env = np.exp(n * (np.log(np.cos(fit_u) - np.sin(fit_u)) + fit_u))
    keep = env > 1e-4
    fit_d = fit_u[keep] * big_l / np.pi
    guess = big_l / (np.pi * np.sqrt(2 * n))
    (amp, width), _ = curve_fit(_gauss, fit_d, env[keep], p0=(1.0, guess))
    return ApproxReport(
        n_particles=n, big_l=big_l, theta=cfg.theta, x_minus_theta=d, log_exact=log_exact,
        log_surrogate=log_surr, rel_error=rel, fitted_width=float(abs(width)),
        predicted_width=float(big_l / (np.pi * np.sqrt(n))), exact_width=float(guess),
        max_rel_error_valid=float(rel[valid].max()), validity_u=validity_u,
    )


def nominal_pair_comparison(x: np.ndarray, hadamard_position: str = "after_cz") -> dict:
    """Per-point fidelity (N = 1) of the engine's Hadamard/CZ composition against
    ``(cos x, i sin x)``, plus the best argument rescaling ``s`` for ``(cos sx, i sin sx)``.
    """
    x = np.asarray(x, dtype=float)
    h = hadamard_2x2()
    v = np.array(PLUS, dtype=complex)
    states = []
    for xi in x:
        if hadamard_position == "after_cz":
            states.append(h @ phase_2x2(xi) @ v)
        else:
            states.append(phase_2x2(xi) @ h @ v)
    states = np.array(states)

    def fid_for(scale):
        nominal = np.stack([np.cos(scale * x), 1j * np.sin(scale * x)], axis=1)
        return np.abs(np.sum(nominal.conj() * states, axis=1)) ** 2

    scales = np.linspace(0.05, 2.5, 491)
    means = [fid_for(s).mean() for s in scales]
    best = float(scales[int(np.argmax(means))])
    return {"per_point_fidelity": fid_for(1.0), "mean_fidelity": float(fid_for(1.0).mean()),
            "best_scale": best, "best_scale_mean_fidelity": float(max(means))}


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    base: ProtocolConfig
    n_values: tuple[int, ...]
    l_values: tuple[int, ...]
    theta_values: tuple[float, ...]
    runs_per_point: int = 1
    master_seed: int = 0

    def __post_init__(self):
        for key in ("n_values", "l_values", "theta_values"):
            if not getattr(self, key):
                raise ConfigError(key, "must be a non-empty list")
        if self.runs_per_point < 1:
            raise ConfigError("runs_per_point", f"must be >= 1, got {self.runs_per_point}")

    def points(self):
        for n in self.n_values:
            for big_l in self.l_values:
                for theta in self.theta_values:
                    yield n, big_l, theta

    def to_dict(self) -> dict:
        return {"base": self.base.to_dict(), "n_values": list(self.n_values), "l_values": list(self.l_values),
                "theta_values": list(self.theta_values), "runs_per_point": self.runs_per_point,
                "master_seed": self.master_seed}


def run_seed(master_seed: int, point_index: int, run_index: int) -> int:
    return int(np.random.SeedSequence([master_seed, point_index, run_index]).generate_state(1)[0])


def _row(cfg: ProtocolConfig) -> dict:
    row = {"protocol": cfg.protocol, "N": cfg.n_particles, "L": cfg.big_l, "theta": cfg.theta,
           "theta2": cfg.theta2, "seed": cfg.seed}
    try:
        rep = run_protocol(cfg)
    except Exception as exc:  # noqa: BLE001 - a failing point is reported in its row
        row.update({"q_outcome": "", "x_outcome": "", "prob_q": "", "fidelity": "", "marginal_std": "",
                    "status": f"error: {type(exc).__name__}: {exc}"})
        return row
    bec = [r for r in rep.records if r["kind"] == "bec"]
    hom = [r for r in rep.records if r["kind"] == "homodyne"]
    row.update({
        "q_outcome": ";".join(str(r["outcome"]) for r in bec),
        "x_outcome": ";".join(repr(r["outcome"]) for r in hom),
        "prob_q": ";".join(repr(r["probability"]) for r in bec),
        "fidelity": rep.fidelity,
        "marginal_std": rep.marginal_std,
        "status": "ok",
    })
    return row


def sweep_threads() -> int:
    env = os.environ.get("HYBRID_SIM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError("HYBRID_SIM_THREADS", f"must be an integer, got {env!r}") from None
    return min(8, os.cpu_count() or 1)


def sweep(cfg: SweepConfig, threads: int | None = None) -> list[dict]:
    """One row per seeded run over the Cartesian product of (N, L, theta).

    Run seeds depend only on the master seed and the (point, run) indices, so
    the rows are identical for any thread count.
    """
    jobs = []
    for p_idx, (n, big_l, theta) in enumerate(cfg.points()):
        for r_idx in range(cfg.runs_per_point):
            jobs.append(replace(cfg.base, n_particles=n, big_l=big_l, theta=theta,
                                seed=run_seed(cfg.master_seed, p_idx, r_idx)))
    threads = sweep_threads() if threads is None else threads
    if threads <= 1 or len(jobs) == 1:
        return [_row(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_row, jobs))


def summarize(rows: list[dict]) -> list[dict]:
    """Mean fidelity and its standard error per (N, L, theta)."""
    groups: dict[tuple, list[float]] = {}
    for r in rows:
        if r["status"] != "ok":
            continue
        groups.setdefault((r["N"], r["L"], r["theta"]), []).append(float(r["fidelity"]))
    out = []
    for (n, big_l, theta), fids in groups.items():
        f = np.asarray(fids)
        sem = float(f.std(ddof=1) / np.sqrt(len(f))) if len(f) > 1 else 0.0
        out.append({"N": n, "L": big_l, "theta": theta, "runs": len(f), "mean_fidelity": float(f.mean()),
                    "sem": sem})
    return out


# ---------------------------------------------------------------------------
# symbolic vs dense cross-check
# ---------------------------------------------------------------------------


def oracle_cross_check(protocol: str = "z_rotation", n_particles: int = 4, big_l: int = 20,
                       theta: float = 0.3, theta2: float = -0.2, grid_points: int = 64,
                       sigma: float = 1.0, q: int | None = None) -> dict:
    """Run one fixed-outcome branch through both engines and report the largest deviations.

    Every BEC measurement uses outcome ``q`` (default ``N // 2``) and every
    homodyne is postselected at its angle.  Outcome distributions (BEC
    probabilities and homodyne marginals, as cell probabilities) are compared
    before each measurement, states after every measurement (up to global phase).
    """
    from .dense_oracle import (
        dense_bec_distribution,
        dense_homodyne,
        dense_init,
        dense_marginal,
        dense_measure_bec,
        dense_run_program,
        phase_aligned_distance,
    )
    from .cv_core import centered_grid
    from .hybrid_engine import bec_outcome_distribution, homodyne_marginal, to_dense

    protocol = ALIASES.get(protocol, protocol)
    q = n_particles // 2 if q is None else q
    if protocol == "z_rotation":
        graph, steps = z_rotation_graph(big_l), [("b3", "c2", theta)]
    elif protocol == "x_rotation":
        graph, steps = x_rotation_graph(big_l), [("b3", "c2", theta)]
    elif protocol == "arbitrary":
        graph, steps = arbitrary_rotation_graph(big_l), [("bl", "c1", theta), ("br", "c2", theta2)]
    else:
        raise ConfigError("protocol", f"unknown protocol {protocol!r}")
    cv = {c: gaussian_wavefunction(centered_grid(th, 7 * sigma, grid_points), th, sigma) for _, c, th in steps}

    sym = init_state(graph, n_particles, cv_inputs=cv)
    dense = dense_init(graph, n_particles, cv)
    dense_run_program(dense, graph)
    b_live, c_live = graph.of_kind("B"), graph.of_kind("C")
    dist_err = [phase_aligned_distance(to_dense(sym, b_live, c_live), dense.tensor)]
    state_err = []
    prob_err = []
    for b, c, th in steps:
        p_sym = bec_outcome_distribution(sym, b, th, big_l)
        p_dense, _ = dense_bec_distribution(dense, b, th, big_l)
        prob_err.append(float(np.max(np.abs(p_sym - p_dense))))
        _, sym = measure_bec(sym, b, th, big_l, mode="fixed", q=q)
        dense_measure_bec(dense, b, th, big_l, q)
        b_live = [v for v in b_live if v != b]
        state_err.append(phase_aligned_distance(to_dense(sym, b_live, c_live), dense.tensor))
        marg = homodyne_marginal(sym, c)
        prob_err.append(float(np.max(np.abs(marg - dense_marginal(dense, c))) * sym.grid(c).dx))
        _, sym = homodyne_cv(sym, c, "postselect", x0=th)
        dense_homodyne(dense, c, th)
        c_live = [v for v in c_live if v != c]
        state_err.append(phase_aligned_distance(to_dense(sym, b_live, c_live), dense.tensor))
    return {
        "protocol": protocol, "n_particles": n_particles, "big_l": big_l, "theta": theta, "theta2": theta2,
        "grid_points": grid_points, "q": q,
        "prep_state_error": dist_err[0],
        "max_distribution_error": max(prob_err),
        "max_state_error": max(state_err),
        "state_errors": state_err,
    }
