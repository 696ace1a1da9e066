"""entbound: entanglement measures on finite-dimensional bipartite states
and closed-form entanglement bounds for field-theory models."""

__version__ = "0.1.0"

from .linalg import (
    DensityMatrix,
    density_matrix,
    load_state,
    maximally_entangled,
    partial_trace,
    partial_transpose,
    product_state,
    pure_state,
    random_density_matrix,
    save_state,
    trace_norm,
)
from .measures import (
    MeasureResult,
    SeparableAnsatz,
    SeparableDecomposition,
    bell_correlation,
    log_dominance_upper,
    modular_nuclearity_pure,
    modular_nuclearity_upper,
    mutual_information,
    ordering_audit,
    relative_entanglement_entropy_upper,
    schmidt_entropy,
)
from .modular import (
    araki_relative_entropy,
    connes_cocycle,
    kms_check,
    natural_cone_rep,
    powers_stormer_gap,
    relative_entropy,
)

__all__ = [
    "DensityMatrix",
    "MeasureResult",
    "SeparableAnsatz",
    "SeparableDecomposition",
    "araki_relative_entropy",
    "bell_correlation",
    "connes_cocycle",
    "density_matrix",
    "kms_check",
    "load_state",
    "log_dominance_upper",
    "maximally_entangled",
    "modular_nuclearity_pure",
    "modular_nuclearity_upper",
    "mutual_information",
    "natural_cone_rep",
    "ordering_audit",
    "partial_trace",
    "partial_transpose",
    "powers_stormer_gap",
    "product_state",
    "pure_state",
    "random_density_matrix",
    "relative_entanglement_entropy_upper",
    "relative_entropy",
    "save_state",
    "schmidt_entropy",
    "trace_norm",
]
