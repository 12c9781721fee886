"""Parameterized-circuit topologies (including Block-Ring), a statevector
simulator, and expressibility / entangling-capability / cost benchmarks."""
from .circuit import (
    CircuitMeta,
    CircuitTemplate,
    Gate,
    GateKind,
    Violation,
    bind_parameters,
    repeat_layers,
    strip_entanglers,
    validate,
)
from .cost import CostReport, analytic_cost, asap_depth, measured_cost
from .descriptors import (
    EntResult,
    ExprResult,
    FidelityHistogram,
    SamplingConfig,
    describe,
    entangling_capability,
    expressibility,
    haar_bin_mass,
    histogram_fidelities,
    kl_divergence,
    mw_q,
    sample_fidelities,
)
from .qasm import export_qasm, parse_qasm
from .statevector import (
    StateVector,
    apply_gate,
    fidelity,
    init_zero,
    project_drop,
    reduced_purity,
    run,
    run_batch,
)
from .topology import (
    BlockLayout,
    block_layout,
    build_all_to_all,
    build_block_ring,
    build_line,
    build_ring,
    build_ring_stride,
    build_suite,
    build_topology,
    default_block_size,
)

__version__ = "0.1.0"
