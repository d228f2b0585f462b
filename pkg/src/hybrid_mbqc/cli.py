"""Command-line front end.

Exit codes: 0 success, 1 rule violation or run error, 2 usage or configuration
error (including malformed graph documents).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

from . import __version__
from .graph_model import (
    GraphError,
    PlanError,
    classify_family,
    graph_outputs,
    parse_graph,
    plan_flow,
    rotation_capability,
    validate_topology,
)
from .protocols import (
    CSV_COLUMNS,
    ConfigError,
    ProtocolConfig,
    ProtocolError,
    SweepConfig,
    oracle_cross_check,
    run_protocol,
    summarize,
    sweep,
)

log = logging.getLogger("hybrid_mbqc")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ORACLE_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# config files
# ---------------------------------------------------------------------------


def _read_json(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"{path}: file not found")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(doc, dict):
        raise ConfigError(str(path), "top level must be a JSON object")
    return doc


_SWEEP_KEYS = {"n_values", "l_values", "theta_values", "runs_per_point", "master_seed"}


def sweep_config_from_dict(doc: dict) -> SweepConfig:
    base = {k: v for k, v in doc.items() if k not in _SWEEP_KEYS}
    for key in ("n_values", "l_values", "theta_values"):
        if key not in doc:
            raise ConfigError(key, "required sweep key is missing")
        if not isinstance(doc[key], list):
            raise ConfigError(key, "must be a list")
    return SweepConfig(
        base=ProtocolConfig.from_dict(base),
        n_values=tuple(doc["n_values"]),
        l_values=tuple(doc["l_values"]),
        theta_values=tuple(float(t) for t in doc["theta_values"]),
        runs_per_point=doc.get("runs_per_point", 1),
        master_seed=doc.get("master_seed", 0),
    )


def load_config(path: str | Path):
    """Parse a config file: a graph document, a sweep config or a single-run config."""
    doc = _read_json(path)
    try:
        if "vertices" in doc:
            try:
                return parse_graph(doc)
            except GraphError as exc:
                raise ConfigError(exc.path or "$", str(exc).split(": ", 1)[-1]) from exc
        if _SWEEP_KEYS & set(doc):
            return sweep_config_from_dict(doc)
        return ProtocolConfig.from_dict(doc)
    except ConfigError as exc:
        raise ConfigError(f"{path}:{exc.key}", str(exc).split(": ", 1)[-1]) from exc
    except TypeError as exc:
        raise ConfigError(str(path), str(exc)) from exc


# ---------------------------------------------------------------------------
# atomic output
# ---------------------------------------------------------------------------


def write_atomic(path: str | Path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(obj):
    import numpy as np

    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def rows_to_csv(rows: list[dict], config: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# hybrid_mbqc {__version__} config={json.dumps(config, sort_keys=True)}\n")
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_validate(args) -> int:
    path = Path(args.graph)
    text = path.read_text() if path.is_file() else None
    if text is None:
        raise UsageError(f"{path}: file not found")
    try:
        g = parse_graph(text)
        outputs = args.outputs.split(",") if args.outputs else graph_outputs(text)
    except GraphError as exc:
        raise ConfigError(f"{path}:{exc.path or '$'}", str(exc).split(": ", 1)[-1]) from exc
    pre = args.pre_homodyne.split(",") if args.pre_homodyne else []
    result = {"graph": str(path), "version": __version__}
    try:
        result["family"] = classify_family(g)
    except GraphError as exc:
        result["family"] = None
        result["family_error"] = str(exc)
    topo = validate_topology(g)
    result["topology"] = topo.to_dict()
    ok = topo.ok
    if topo.ok:
        candidates = [outputs] if outputs else [[b] for b in g.of_kind("B")]
        plans, failures = [], []
        for outs in candidates:
            try:
                plan = plan_flow(g, outs, pre_homodyne=pre)
            except PlanError as exc:
                failures.append({"outputs": outs, "error": str(exc), "report": exc.report.to_dict()})
                continue
            plans.append({"outputs": outs, "plan": plan.to_dict(),
                          "capability": {o: rotation_capability(g, plan, o) for o in outs}})
        result["plans"] = plans
        result["plan_failures"] = failures
        ok = bool(plans)
        if not ok:
            for f in failures[:1]:
                print(f"Rule 2 violation: {f['error']}", file=sys.stderr)
    else:
        for v in topo.violations:
            print(f"{v.rule} violation: {v.message}", file=sys.stderr)
    result["ok"] = ok
    if args.out:
        write_atomic(args.out, _json_text(result))
    else:
        print(_json_text(result), end="")
    return EXIT_OK if ok else EXIT_FAIL


def _protocol_config(args) -> ProtocolConfig:
    cfg = load_config(args.config) if args.config else ProtocolConfig()
    if not isinstance(cfg, ProtocolConfig):
        raise ConfigError(str(args.config), "expected a single-run protocol config")
    overrides = {}
    for flag, key in (("protocol", "protocol"), ("theta", "theta"), ("theta2", "theta2"), ("N", "n_particles"),
                      ("L", "big_l"), ("seed", "seed"), ("mode", "homodyne_mode"), ("q", "fixed_q"),
                      ("grid_points", "grid_points")):
        val = getattr(args, flag, None)
        if val is not None:
            overrides[key] = val
    if overrides.get("fixed_q") is not None:
        overrides["bec_outcome_mode"] = "fixed"
    return replace(cfg, **overrides)


def _cmd_run(args) -> int:
    cfg = _protocol_config(args)
    report = run_protocol(cfg)
    payload = {"version": __version__, **report.to_dict()}
    if args.out:
        write_atomic(args.out, _json_text(payload))
    else:
        print(_json_text(payload), end="")
    log.info("fidelity %.6g", report.fidelity)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if not isinstance(cfg, SweepConfig):
        raise ConfigError(str(args.config), "expected a sweep config with n_values/l_values/theta_values")
    if args.seed is not None:
        cfg = replace(cfg, master_seed=args.seed)
    rows = sweep(cfg)
    text = rows_to_csv(rows, {**cfg.to_dict(), "version": __version__})
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    for s in summarize(rows):
        log.info("N=%s L=%s theta=%s mean fidelity %.4g +/- %.2g", s["N"], s["L"], s["theta"],
                 s["mean_fidelity"], s["sem"])
    return EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_FAIL


def _cmd_oracle(args) -> int:
    protocol = args.protocol or "z_rotation"
    result = oracle_cross_check(protocol, n_particles=args.N or 4, big_l=args.L or 20,
                                theta=args.theta if args.theta is not None else 0.3,
                                theta2=args.theta2 if args.theta2 is not None else -0.2,
                                grid_points=args.grid_points or 64, q=args.q)
    worst = max(result["max_distribution_error"], result["max_state_error"], result["prep_state_error"])
    result.update({"version": __version__, "tolerance": ORACLE_TOL, "ok": worst <= ORACLE_TOL})
    if args.out:
        write_atomic(args.out, _json_text(result))
    else:
        print(_json_text(result), end="")
    if not result["ok"]:
        print(f"symbolic and dense engines disagree by {worst:.3e}", file=sys.stderr)
    return EXIT_OK if result["ok"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hybrid-mbqc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check graph rules and search for a measurement flow")
    p.add_argument("--graph", required=True)
    p.add_argument("--outputs", help="comma-separated output BEC ids")
    p.add_argument("--pre-homodyne", help="comma-separated CV ids to homodyne first")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_validate)

    def protocol_flags(p, with_mode=True):
        p.add_argument("--protocol", choices=["z", "x", "arbitrary", "z_rotation", "x_rotation"])
        p.add_argument("--theta", type=float)
        p.add_argument("--theta2", type=float)
        p.add_argument("--N", type=int)
        p.add_argument("--L", type=int)
        p.add_argument("--q", type=int, help="fix the BEC outcome instead of sampling it")
        p.add_argument("--grid-points", dest="grid_points", type=int)
        if with_mode:
            p.add_argument("--mode", choices=["sample", "postselect", "expectation"])
            p.add_argument("--seed", type=int)
        p.add_argument("--out")

    p = sub.add_parser("run", help="run one protocol and write a JSON report")
    protocol_flags(p)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep", help="parameter sweep to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, help="override the master seed")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("oracle", help="cross-check the symbolic engine against the dense oracle")
    protocol_flags(p, with_mode=False)
    p.set_defaults(func=_cmd_oracle)
    return parser


def execute(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphError as exc:
        print(f"graph error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ProtocolError, ValueError, RuntimeError) as exc:
        print(f"run error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main():
    sys.exit(execute())
