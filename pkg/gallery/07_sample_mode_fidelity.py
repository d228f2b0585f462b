"""
Fidelity when both outcomes are sampled
=======================================

In sample mode the output phase is the sampled homodyne value, not theta.
The spread of that value shrinks like 1/sqrt(N) but the N-particle state
becomes sensitive to phase errors at the same rate, so at fixed L the
average fidelity does not improve with N.  The acceptance run records the
full 200-run numbers in ``results/sample_fidelity_trend.json``.
"""

# %%
from __future__ import annotations

from hybrid_mbqc.protocols import ProtocolConfig, SweepConfig, summarize, sweep

cfg = SweepConfig(ProtocolConfig(theta=0.3, grid_points=1024), (10, 100, 1000), (500,), (0.3,),
                  runs_per_point=40, master_seed=7)
for s in summarize(sweep(cfg)):
    print(f"N={s['N']:5d}: mean fidelity {s['mean_fidelity']:.3f} +/- {s['sem']:.3f} ({s['runs']} runs)")
