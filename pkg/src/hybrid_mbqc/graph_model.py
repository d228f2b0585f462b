"""Hybrid BEC/CV graph states: parsing, admissibility rules and measurement flow.

Three rules decide whether a graph and a measurement order can drive a rotation:

* ``R1`` every edge joins a BEC vertex (kind ``B``) to a CV vertex (kind ``C``);
* ``R2`` a measured BEC must have exactly one live CV neighbour, and that CV
  must be homodyned before any second BEC measurement lands on it;
* ``R3`` there are no more CV vertices than BEC vertices.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Literal

import networkx as nx

Kind = Literal["B", "C"]
Family = Literal["chain_1d", "cluster_2d", "ring", "star", "tree", "complete", "other"]


class GraphError(ValueError):
    """Malformed graph document or graph-level precondition failure."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class PlanError(GraphError):
    """No measurement plan satisfies the rules; ``report`` carries the blocking violations."""

    def __init__(self, message: str, report: RuleReport):
        self.report = report
        super().__init__(message)


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    t: float

    def other(self, vertex: str) -> str:
        return self.v if vertex == self.u else self.u

    def joins(self, a: str, b: str) -> bool:
        return {self.u, self.v} == {a, b}


@dataclass(frozen=True)
class HadamardMark:
    vertex: str
    position: Literal["before_cz", "after_cz"] = "after_cz"


@dataclass(frozen=True)
class GateStep:
    """One preparation gate: ``op="cz"`` on ``(b, c)`` or ``op="h"`` on ``b``."""

    op: Literal["cz", "h"]
    vertex: str
    partner: str | None = None
    t: float | None = None


@dataclass(frozen=True)
class GraphSpec:
    vertices: tuple[tuple[str, str], ...]
    edges: tuple[Edge, ...]
    hadamard_marks: tuple[HadamardMark, ...] = ()
    prep_program: tuple[GateStep, ...] | None = None
    magic_l: int | None = None

    def __post_init__(self):
        ids = [v for v, _ in self.vertices]
        if not ids:
            raise GraphError("graph has no vertices", "vertices")
        seen = set()
        for v, kind in self.vertices:
            if v in seen:
                raise GraphError(f"duplicate vertex id {v!r}", "vertices")
            if kind not in ("B", "C"):
                raise GraphError(f"vertex {v!r} has unknown kind {kind!r}", "vertices")
            seen.add(v)
        for i, e in enumerate(self.edges):
            for end in (e.u, e.v):
                if end not in seen:
                    raise GraphError(f"edge references unknown vertex {end!r}", f"edges[{i}]")
            if e.u == e.v:
                raise GraphError(f"self-loop on {e.u!r}", f"edges[{i}]")
            if not e.t > 0:
                raise GraphError(f"coupling time must be positive, got {e.t}", f"edges[{i}].t")
        kinds = dict(self.vertices)
        for i, m in enumerate(self.hadamard_marks):
            if kinds.get(m.vertex) != "B":
                raise GraphError(f"Hadamard mark on non-BEC vertex {m.vertex!r}", f"hadamard[{i}]")
        if self.prep_program is not None:
            for i, step in enumerate(self.prep_program):
                if step.op == "h":
                    if kinds.get(step.vertex) != "B":
                        raise GraphError(f"Hadamard on non-BEC vertex {step.vertex!r}", f"program[{i}]")
                elif step.op == "cz":
                    if self.find_edge(step.vertex, step.partner) is None:
                        raise GraphError(
                            f"program references missing edge {step.vertex!r}-{step.partner!r}", f"program[{i}]"
                        )
                else:
                    raise GraphError(f"unknown gate {step.op!r}", f"program[{i}]")

    @property
    def kinds(self) -> dict[str, str]:
        return dict(self.vertices)

    @property
    def ids(self) -> list[str]:
        return [v for v, _ in self.vertices]

    def of_kind(self, kind: str) -> list[str]:
        return [v for v, k in self.vertices if k == kind]

    def neighbors(self, vertex: str) -> list[str]:
        return sorted(e.other(vertex) for e in self.edges if vertex in (e.u, e.v))

    def find_edge(self, a: str, b: str | None) -> Edge | None:
        for e in self.edges:
            if e.joins(a, b):
                return e
        return None

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        for v, k in self.vertices:
            g.add_node(v, kind=k)
        for e in self.edges:
            g.add_edge(e.u, e.v, t=e.t)
        return g

    def program(self) -> tuple[GateStep, ...]:
        """Explicit preparation program, or the default one built from the marks.

        Default order: ``before_cz`` Hadamards, every edge in listed order, then
        ``after_cz`` Hadamards.
        """
        if self.prep_program is not None:
            return self.prep_program
        kinds = self.kinds
        steps = [GateStep("h", m.vertex) for m in self.hadamard_marks if m.position == "before_cz"]
        for e in self.edges:
            b, c = (e.u, e.v) if kinds[e.u] == "B" else (e.v, e.u)
            steps.append(GateStep("cz", b, c, e.t))
        steps += [GateStep("h", m.vertex) for m in self.hadamard_marks if m.position == "after_cz"]
        return tuple(steps)

    def to_dict(self) -> dict:
        doc = {
            "vertices": [{"id": v, "kind": k} for v, k in self.vertices],
            "edges": [{"u": e.u, "v": e.v, "t": e.t} for e in self.edges],
            "hadamard": [{"vertex": m.vertex, "position": m.position} for m in self.hadamard_marks],
        }
        if self.magic_l is not None:
            doc["magic_L"] = self.magic_l
        if self.prep_program is not None:
            doc["program"] = [
                {"op": "cz", "u": s.vertex, "v": s.partner} if s.op == "cz" else {"op": "h", "vertex": s.vertex}
                for s in self.prep_program
            ]
        return doc


def magic_time(big_l: float) -> float:
    return 2.0 * math.pi / big_l


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOP_KEYS = {"vertices", "edges", "hadamard", "magic_L", "program", "outputs"}


def _expect(cond: bool, message: str, path: str):
    if not cond:
        raise GraphError(message, path)


def parse_graph(text: str | dict) -> GraphSpec:
    """Build a ``GraphSpec`` from the JSON graph document.

    Errors carry a JSON path such as ``edges[2].t``.
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON ({exc.msg} at line {exc.lineno})", "$") from exc
    else:
        doc = text
    _expect(isinstance(doc, dict), "graph document must be a JSON object", "$")
    unknown = set(doc) - _TOP_KEYS
    _expect(not unknown, f"unknown keys {sorted(unknown)}", "$")

    magic_l = doc.get("magic_L")
    if magic_l is not None:
        _expect(isinstance(magic_l, int) and not isinstance(magic_l, bool) and magic_l >= 1,
                f"magic_L must be a positive integer, got {magic_l!r}", "magic_L")

    raw_vertices = doc.get("vertices")
    _expect(isinstance(raw_vertices, list), "missing or non-list 'vertices'", "vertices")
    _expect(len(raw_vertices) > 0, "graph has no vertices", "vertices")
    vertices = []
    for i, rv in enumerate(raw_vertices):
        path = f"vertices[{i}]"
        _expect(isinstance(rv, dict), "vertex must be an object", path)
        _expect(set(rv) <= {"id", "kind"}, f"unknown keys {sorted(set(rv) - {'id', 'kind'})}", path)
        _expect(isinstance(rv.get("id"), str) and rv["id"], "vertex id must be a non-empty string", path + ".id")
        _expect(rv.get("kind") in ("B", "C"), f"kind must be 'B' or 'C', got {rv.get('kind')!r}", path + ".kind")
        vertices.append((rv["id"], rv["kind"]))
    ids = {v for v, _ in vertices}

    raw_edges = doc.get("edges", [])
    _expect(isinstance(raw_edges, list), "'edges' must be a list", "edges")
    edges = []
    for i, re_ in enumerate(raw_edges):
        path = f"edges[{i}]"
        _expect(isinstance(re_, dict), "edge must be an object", path)
        _expect(set(re_) <= {"u", "v", "t"}, f"unknown keys {sorted(set(re_) - {'u', 'v', 't'})}", path)
        for end in ("u", "v"):
            _expect(end in re_, f"missing '{end}'", path)
            _expect(re_[end] in ids, f"unknown vertex id {re_[end]!r}", f"{path}.{end}")
        t = re_.get("t", 1.0)
        if t == "magic":
            _expect(magic_l is not None, "'t': 'magic' requires 'magic_L'", f"{path}.t")
            t = magic_time(magic_l)
        _expect(isinstance(t, (int, float)) and not isinstance(t, bool) and t > 0,
                f"coupling time must be a positive number or 'magic', got {t!r}", f"{path}.t")
        edges.append(Edge(re_["u"], re_["v"], float(t)))

    marks = []
    for i, rm in enumerate(doc.get("hadamard", [])):
        path = f"hadamard[{i}]"
        _expect(isinstance(rm, dict) and rm.get("vertex") in ids, "Hadamard mark must name a known vertex", path)
        pos = rm.get("position", "after_cz")
        _expect(pos in ("before_cz", "after_cz"), f"position must be before_cz/after_cz, got {pos!r}",
                path + ".position")
        marks.append(HadamardMark(rm["vertex"], pos))

    program = None
    if "program" in doc:
        program = []
        for i, rs in enumerate(doc["program"]):
            path = f"program[{i}]"
            _expect(isinstance(rs, dict), "program step must be an object", path)
            if rs.get("op") == "h":
                _expect(rs.get("vertex") in ids, f"unknown vertex {rs.get('vertex')!r}", path + ".vertex")
                program.append(GateStep("h", rs["vertex"]))
            elif rs.get("op") == "cz":
                _expect(rs.get("u") in ids and rs.get("v") in ids, "cz step needs known 'u' and 'v'", path)
                kinds = dict(vertices)
                b, c = (rs["u"], rs["v"]) if kinds[rs["u"]] == "B" else (rs["v"], rs["u"])
                edge = next((e for e in edges if e.joins(b, c)), None)
                _expect(edge is not None, f"program references missing edge {b!r}-{c!r}", path)
                program.append(GateStep("cz", b, c, edge.t))
            else:
                raise GraphError(f"unknown op {rs.get('op')!r}", path + ".op")
        program = tuple(program)

    return GraphSpec(tuple(vertices), tuple(edges), tuple(marks), program, magic_l)


def graph_outputs(text: str | dict) -> list[str] | None:
    """The optional ``outputs`` list of a graph document."""
    doc = json.loads(text) if isinstance(text, (str, bytes)) else text
    out = doc.get("outputs")
    if out is None:
        return None
    if not isinstance(out, list) or not all(isinstance(v, str) for v in out):
        raise GraphError("'outputs' must be a list of vertex ids", "outputs")
    return out


# ---------------------------------------------------------------------------
# rule checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    rule: Literal["R1", "R2", "R3"]
    witnesses: tuple[str, ...]
    message: str


@dataclass
class RuleReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def add(self, rule, witnesses, message):
        self.violations.append(Violation(rule, tuple(witnesses), message))

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [{"rule": v.rule, "witnesses": list(v.witnesses), "message": v.message}
                           for v in self.violations],
        }


def validate_topology(g: GraphSpec) -> RuleReport:
    report = RuleReport()
    kinds = g.kinds
    for e in g.edges:
        if kinds[e.u] == kinds[e.v]:
            report.add("R1", (e.u, e.v),
                       f"edge {e.u}-{e.v} joins two {kinds[e.u]} vertices; every edge must join a B to a C")
    n_b, n_c = len(g.of_kind("B")), len(g.of_kind("C"))
    if n_c > n_b:
        report.add("R3", tuple(g.of_kind("C")), f"N_C = {n_c} exceeds N_B = {n_b}")
    return report


@dataclass(frozen=True)
class PlanStep:
    action: Literal["measure_bec", "homodyne_cv"]
    vertex: str
    theta: float | None = None
    variant: str = "x_basis"


@dataclass(frozen=True)
class MeasurementPlan:
    steps: tuple[PlanStep, ...]
    output_vertices: frozenset[str]

    def __post_init__(self):
        seen = set()
        for s in self.steps:
            if s.vertex in seen:
                raise GraphError(f"vertex {s.vertex!r} appears twice in the plan")
            if s.vertex in self.output_vertices:
                raise GraphError(f"output vertex {s.vertex!r} appears in a plan step")
            seen.add(s.vertex)

    @property
    def measured_bec(self) -> list[str]:
        return [s.vertex for s in self.steps if s.action == "measure_bec"]

    @property
    def homodyned_cv(self) -> list[str]:
        return [s.vertex for s in self.steps if s.action == "homodyne_cv"]

    def to_dict(self) -> dict:
        return {
            "steps": [{"action": s.action, "vertex": s.vertex} for s in self.steps],
            "outputs": sorted(self.output_vertices),
        }


def plan_from_pairs(pairs: Iterable[tuple[str, str]], outputs: Iterable[str]) -> MeasurementPlan:
    """Plan that measures each BEC then immediately homodynes its CV partner."""
    steps = []
    for b, c in pairs:
        steps += [PlanStep("measure_bec", b), PlanStep("homodyne_cv", c)]
    return MeasurementPlan(tuple(steps), frozenset(outputs))


def _simulate(g: GraphSpec, plan: MeasurementPlan):
    """Walk the plan; returns (report, pairs) where pairs maps each resolving CV to its BEC."""
    report = RuleReport()
    kinds = g.kinds
    live = set(g.ids)
    pending: dict[str, list[str]] = {c: [] for c in g.of_kind("C")}
    pairs: dict[str, str] = {}
    n_measured = 0
    for i, step in enumerate(plan.steps):
        v = step.vertex
        if v not in kinds:
            report.add("R2", (v,), f"step {i}: unknown vertex {v!r}")
            continue
        if step.action == "measure_bec":
            if kinds[v] != "B":
                report.add("R2", (v,), f"step {i}: {v} is not a BEC vertex")
                continue
            live_c = [c for c in g.neighbors(v) if c in live and kinds[c] == "C"]
            n_measured += 1
            live.discard(v)
            if len(live_c) != 1:
                report.add("R2", (v, *live_c),
                           f"step {i}: measured BEC {v} has {len(live_c)} live CV neighbours {live_c}; "
                           "exactly one is needed to absorb its delta function")
                continue
            c = live_c[0]
            pending[c].append(v)
            if len(pending[c]) > 1:
                report.add("R2", (c, *pending[c]),
                           f"step {i}: CV {c} carries delta functions from {pending[c]}; "
                           "one integration cannot resolve two")
        elif step.action == "homodyne_cv":
            if kinds[v] != "C":
                report.add("R2", (v,), f"step {i}: {v} is not a CV vertex")
                continue
            if len(pending[v]) == 1:
                pairs[v] = pending[v][0]
            pending[v] = []
            live.discard(v)
        else:
            report.add("R2", (v,), f"step {i}: unknown action {step.action!r}")
    unresolved = [c for c, bs in pending.items() if bs]
    if unresolved:
        report.add("R2", tuple(unresolved),
                   f"CV vertices {unresolved} hold delta functions that are never integrated out")
    if n_measured != len(pairs) and not report.violations:
        report.add("R2", tuple(plan.measured_bec),
                   f"{n_measured} measured BECs but only {len(pairs)} matching CV homodynes")
    return report, pairs


def validate_plan(g: GraphSpec, plan: MeasurementPlan) -> RuleReport:
    """Check a measurement order step by step against rule 2."""
    report, _ = _simulate(g, plan)
    kinds = g.kinds
    for v in plan.output_vertices:
        if kinds.get(v) != "B":
            report.add("R2", (v,), f"output {v!r} is not a BEC vertex")
    return report


def plan_pairs(g: GraphSpec, plan: MeasurementPlan) -> dict[str, str]:
    """Map each delta-resolving CV vertex to the BEC whose measurement it absorbs."""
    return _simulate(g, plan)[1]


def plan_flow(g: GraphSpec, outputs: Iterable[str], pre_homodyne: Iterable[str] = (),
              homodyne_leftovers: bool = True) -> MeasurementPlan:
    """Greedy measurement order that measures every non-output BEC.

    Repeatedly measures the lowest-id BEC that has exactly one live CV
    neighbour with no pending delta, then homodynes that CV.  ``pre_homodyne``
    CV vertices are measured first (e.g. to open a ring).  Raises
    ``PlanError`` when the greedy search gets stuck.
    """
    outputs = frozenset(outputs)
    kinds = g.kinds
    if not outputs:
        raise GraphError("at least one output vertex is required")
    for v in outputs:
        if kinds.get(v) != "B":
            raise GraphError(f"output {v!r} is not a BEC vertex")
    topo = validate_topology(g)
    if not topo.ok:
        raise PlanError("graph violates " + ", ".join(sorted(topo.rules())), topo)

    steps = []
    live = set(g.ids)
    for c in pre_homodyne:
        if kinds.get(c) != "C":
            raise GraphError(f"pre-homodyne vertex {c!r} is not a CV vertex")
        steps.append(PlanStep("homodyne_cv", c))
        live.discard(c)

    todo = sorted(v for v in g.of_kind("B") if v not in outputs)
    while todo:
        choice = None
        for b in todo:
            live_c = [c for c in g.neighbors(b) if c in live and kinds[c] == "C"]
            if len(live_c) == 1:
                choice = (b, live_c[0])
                break
        if choice is None:
            report = RuleReport()
            for b in todo:
                live_c = [c for c in g.neighbors(b) if c in live and kinds[c] == "C"]
                report.add("R2", (b, *live_c),
                           f"BEC {b} has {len(live_c)} live CV neighbours; exactly one is needed")
            hint = ""
            if nx.cycle_basis(g.to_networkx()):
                hint = ("; the graph contains a closed loop - homodyne a CV vertex first "
                        "(pre_homodyne) to open the loop")
            raise PlanError(f"no valid measurement flow: Rule 2 blocks BECs {todo}{hint}", report)
        b, c = choice
        steps += [PlanStep("measure_bec", b), PlanStep("homodyne_cv", c)]
        live -= {b, c}
        todo.remove(b)

    if homodyne_leftovers:
        for c in sorted(v for v in g.of_kind("C") if v in live):
            steps.append(PlanStep("homodyne_cv", c))

    plan = MeasurementPlan(tuple(steps), outputs)
    report = validate_plan(g, plan)
    if not report.ok:  # pragma: no cover - greedy construction should never produce this
        raise PlanError("internal error: constructed plan failed validation", report)
    return plan


def rotation_capability(g: GraphSpec, plan: MeasurementPlan, output: str,
                        assume_hadamard: bool = True) -> Literal["none", "single_axis", "arbitrary"]:
    """How general a rotation the plan can imprint on ``output``.

    Counts CV neighbours of ``output`` whose delta functions the plan resolves.
    Two or more, with a Hadamard on ``output`` between their couplings, give an
    arbitrary rotation.  ``assume_hadamard`` supplies that Hadamard when the
    graph does not carry one.
    """
    pairs = plan_pairs(g, plan)
    acting = [c for c in g.neighbors(output) if c in pairs]
    if not acting:
        return "none"
    if len(acting) == 1:
        return "single_axis"
    if assume_hadamard:
        return "arbitrary"
    program = g.program()
    cz_positions = [i for i, s in enumerate(program) if s.op == "cz" and s.vertex == output
                    and s.partner in acting]
    h_positions = [i for i, s in enumerate(program) if s.op == "h" and s.vertex == output]
    if any(cz_positions[0] < h < cz_positions[-1] for h in h_positions):
        return "arbitrary"
    return "single_axis"


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def _is_grid(g: nx.Graph) -> bool:
    n, m = g.number_of_nodes(), g.number_of_edges()
    degrees = sorted(d for _, d in g.degree())
    for rows in range(2, int(math.isqrt(n)) + 1):
        if n % rows:
            continue
        cols = n // rows
        if m != 2 * rows * cols - rows - cols:
            continue
        template = nx.grid_2d_graph(rows, cols)
        if sorted(d for _, d in template.degree()) == degrees and nx.is_isomorphic(g, template):
            return True
    return False


def classify_family(g: GraphSpec) -> Family:
    """Standard graph family of the underlying simple graph.

    Checked in order: complete (3+ vertices), ring, chain, star, tree,
    2-D grid, other.
    """
    G = g.to_networkx()
    if not nx.is_connected(G):
        raise GraphError("graph is not connected")
    n = G.number_of_nodes()
    degrees = [d for _, d in G.degree()]
    if n >= 3 and G.number_of_edges() == n * (n - 1) // 2:
        return "complete"
    if n >= 3 and all(d == 2 for d in degrees):
        return "ring"
    if nx.is_tree(G):
        if max(degrees, default=0) <= 2:
            return "chain_1d"
        if max(degrees) == n - 1:
            return "star"
        return "tree"
    if _is_grid(G):
        return "cluster_2d"
    return "other"


# ---------------------------------------------------------------------------
# builders for the standard layouts
# ---------------------------------------------------------------------------


def _spec(vertices, edges, marks=(), program=None, magic_l=None) -> GraphSpec:
    return GraphSpec(tuple(vertices), tuple(edges), tuple(marks), program, magic_l)


def z_rotation_graph(big_l: int) -> GraphSpec:
    """Output ``b1`` - ``c2`` (t = 1) - ``b3`` (magic time), measured BEC on the right."""
    return _spec([("b1", "B"), ("c2", "C"), ("b3", "B")],
                 [Edge("b1", "c2", 1.0), Edge("c2", "b3", magic_time(big_l))], magic_l=big_l)


def x_rotation_graph(big_l: int) -> GraphSpec:
    """The z-rotation chain with a Hadamard on the output after its CZ."""
    base = z_rotation_graph(big_l)
    return _spec(base.vertices, base.edges, [HadamardMark("b1", "after_cz")], magic_l=big_l)


def arbitrary_rotation_graph(big_l: int) -> GraphSpec:
    """Five-vertex chain ``bl - c1 - b0 - c2 - br`` with the output ``b0`` in the middle.

    Preparation: both CZs on the left three vertices, a Hadamard on ``b0``,
    then both CZs on the right three vertices.
    """
    tm = magic_time(big_l)
    edges = [Edge("bl", "c1", tm), Edge("c1", "b0", 1.0), Edge("b0", "c2", 1.0), Edge("c2", "br", tm)]
    program = (
        GateStep("cz", "bl", "c1", tm),
        GateStep("cz", "b0", "c1", 1.0),
        GateStep("h", "b0"),
        GateStep("cz", "b0", "c2", 1.0),
        GateStep("cz", "br", "c2", tm),
    )
    return _spec([("bl", "B"), ("c1", "C"), ("b0", "B"), ("c2", "C"), ("br", "B")], edges,
                 [HadamardMark("b0", "after_cz")], program, big_l)


def chain_graph(n_vertices: int, start: Kind = "B", t: float = 1.0) -> GraphSpec:
    kinds = [start if i % 2 == 0 else ("C" if start == "B" else "B") for i in range(n_vertices)]
    ids = [f"{k.lower()}{i}" for i, k in enumerate(kinds)]
    edges = [Edge(ids[i], ids[i + 1], t) for i in range(n_vertices - 1)]
    return _spec(zip(ids, kinds), edges)


def ring_graph(n_vertices: int, t: float = 1.0) -> GraphSpec:
    if n_vertices % 2:
        raise GraphError("an alternating B/C ring needs an even number of vertices")
    g = chain_graph(n_vertices, t=t)
    ids = g.ids
    return _spec(g.vertices, g.edges + (Edge(ids[-1], ids[0], t),))


def star_graph(n_leaves: int, center: Kind = "C", t: float = 1.0) -> GraphSpec:
    leaf = "B" if center == "C" else "C"
    vertices = [("hub", center)] + [(f"{leaf.lower()}{i}", leaf) for i in range(1, n_leaves + 1)]
    edges = [Edge("hub", v, t) for v, _ in vertices[1:]]
    return _spec(vertices, edges)


def spider_graph(n_arms: int, t: float = 1.0) -> GraphSpec:
    """BEC hub with ``n_arms`` arms ``hub - c_i - b_i``."""
    vertices = [("hub", "B")]
    edges = []
    for i in range(1, n_arms + 1):
        vertices += [(f"c{i}", "C"), (f"b{i}", "B")]
        edges += [Edge("hub", f"c{i}", t), Edge(f"c{i}", f"b{i}", t)]
    return _spec(vertices, edges)


def tree_graph(t: float = 1.0) -> GraphSpec:
    """BEC root with two BEC children via CVs; the left child has two leaf branches."""
    vertices = [("root", "B"), ("ca", "C"), ("ba", "B"), ("cb", "C"), ("bb", "B"),
                ("ca1", "C"), ("ba1", "B"), ("ca2", "C"), ("ba2", "B")]
    edges = [Edge("root", "ca", t), Edge("ca", "ba", t), Edge("root", "cb", t), Edge("cb", "bb", t),
             Edge("ba", "ca1", t), Edge("ca1", "ba1", t), Edge("ba", "ca2", t), Edge("ca2", "ba2", t)]
    return _spec(vertices, edges)


def grid_graph(rows: int, cols: int, t: float = 1.0) -> GraphSpec:
    vertices, edges = [], []
    for r in range(rows):
        for c in range(cols):
            kind = "B" if (r + c) % 2 == 0 else "C"
            vertices.append((f"{kind.lower()}{r}_{c}", kind))
    name = {(r, c): vertices[r * cols + c][0] for r in range(rows) for c in range(cols)}
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append(Edge(name[r, c], name[r, c + 1], t))
            if r + 1 < rows:
                edges.append(Edge(name[r, c], name[r + 1, c], t))
    return _spec(vertices, edges)


def complete_graph(kinds: Iterable[Kind], t: float = 1.0) -> GraphSpec:
    vertices = [(f"v{i}", k) for i, k in enumerate(kinds)]
    edges = [Edge(vertices[i][0], vertices[j][0], t)
             for i in range(len(vertices)) for j in range(i + 1, len(vertices))]
    return _spec(vertices, edges)
