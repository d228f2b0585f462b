"""
Arbitrary rotation on the middle of a five-vertex chain
=======================================================

``bl - c1 - b0 - c2 - br``: the output ``b0`` receives a z rotation through
``c1``, a Hadamard, then a second z rotation through ``c2``.  The result is the
composition of a z map and an x map, carried in a fixed Hadamard frame.
"""

# %%
from __future__ import annotations

import numpy as np

from hybrid_mbqc.protocols import ProtocolConfig, composed_map, params_from_dict, run_protocol

plus = np.array([1, 1]) / np.sqrt(2)
for theta, theta2 in [(0.3, 0.0), (0.3, 0.8), (-1.1, 2.0)]:
    rep = run_protocol(ProtocolConfig(protocol="arbitrary", theta=theta, theta2=theta2, n_particles=50,
                                      homodyne_mode="postselect"))
    out = params_from_dict(rep.frame_output_params).vector
    overlap = abs(np.vdot(composed_map(theta, theta2) @ plus, out))
    print(f"theta={theta:+.2f} theta2={theta2:+.2f}: |<target|out>| = {overlap:.12f}")

# %%
# The order in which the two side BECs are measured does not matter.
a = run_protocol(ProtocolConfig(protocol="arbitrary", theta=0.4, theta2=-0.6, n_particles=20,
                                homodyne_mode="postselect"))
b = run_protocol(ProtocolConfig(protocol="arbitrary", theta=0.4, theta2=-0.6, n_particles=20,
                                homodyne_mode="postselect", measurement_order="right_first"))
print("left-first vs right-first fidelity:", a.fidelity, b.fidelity)
