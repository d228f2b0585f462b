"""
Which graphs support measurement-driven rotations
=================================================

Edges must join a BEC to a CV (rule 1).  Each measured BEC must leave exactly
one live CV neighbour to absorb its delta function, and no CV may hold two
(rule 2).  There may be no more CVs than BECs (rule 3).  The planner searches
for a valid order, lowest id first.
"""

# %%
from __future__ import annotations

from hybrid_mbqc.graph_model import (
    PlanError,
    chain_graph,
    classify_family,
    complete_graph,
    grid_graph,
    plan_flow,
    ring_graph,
    rotation_capability,
    spider_graph,
    tree_graph,
    validate_topology,
)

chain = chain_graph(5)
for out in ("b0", "b2"):
    plan = plan_flow(chain, [out])
    print(f"chain, output {out}: {rotation_capability(chain, plan, out)}")

# %%
ring = ring_graph(6)
try:
    plan_flow(ring, ["b0"])
except PlanError as exc:
    print("ring:", exc)
plan = plan_flow(ring, ["b0"], pre_homodyne=["c5"])
print("ring opened at c5:", [(s.action, s.vertex) for s in plan.steps])

# %%
for name, g, out in [("spider", spider_graph(3), "hub"), ("tree", tree_graph(), "root")]:
    plan = plan_flow(g, [out])
    print(f"{name} ({classify_family(g)}): measure {plan.measured_bec} -> {rotation_capability(g, plan, out)}")

# %%
grid = grid_graph(3, 3)
try:
    plan_flow(grid, ["b1_1"])
except PlanError as exc:
    print("3x3 cluster:", str(exc).split(";")[0])
print("K3:", validate_topology(complete_graph("BCB")).to_dict()["violations"][0]["message"])
