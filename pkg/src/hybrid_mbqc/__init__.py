"""Measurement-based rotations on hybrid graph states of BEC qubits and CV qubits.

Modules:
    spin_core: Fock basis, spin operators, spin coherent states, the BEC
        Hadamard and closed-form measurement amplitudes.
    cv_core: position-grid wavefunctions for CV registers.
    graph_model: graph documents, the three admissibility rules, family
        classification and measurement-flow planning.
    hybrid_engine: coherent-closure simulator, exact at finite N.
    dense_oracle: dense Fock x grid simulator used to cross-check the engine.
    protocols: z, x and arbitrary rotation protocols, sweeps and diagnostics.
    cli: the ``hybrid-mbqc`` command.
"""

__version__ = "0.1.0"

from .spin_core import (  # noqa: E402
    FockVector,
    MeasurementBasisSpec,
    SpinCoherentParams,
    basis_amplitude,
    coherent_overlap,
    coherent_to_fock,
    hadamard_unitary,
    rotate_coherent,
    spin_matrix,
)
from .cv_core import GridSpec, GridWavefunction, gaussian_wavefunction, make_grid, normalize  # noqa: E402
from .graph_model import (  # noqa: E402
    GraphSpec,
    MeasurementPlan,
    RuleReport,
    classify_family,
    parse_graph,
    plan_flow,
    validate_plan,
    validate_topology,
)
from .protocols import (  # noqa: E402
    ProtocolConfig,
    approx_diagnostics,
    run_arbitrary_rotation,
    run_protocol,
    run_x_rotation,
    run_z_rotation,
    sweep,
)
