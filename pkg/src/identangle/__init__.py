"""Entanglement from spatial overlap of partially distinguishable particles.

The package models N identical particles sent through a linear transformation
onto M detectors, keeps the outcomes where every detector fires exactly once,
and traces out whatever hidden degrees of freedom make the particles partially
distinguishable. The result is a spin-register density matrix plus the
postselection success probability, ready for witness checks, phase searches
and simulated tomography.
"""

__version__ = "0.1.0"

from .brute_force import brute_density_matrix, permanent
from .density import DensityMatrix, spin_pattern_index
from .entanglement import (
    GHZ_WITNESS_BOUND,
    VERDICT_GHZ,
    VERDICT_INCONCLUSIVE,
    VERDICT_W,
    W_WITNESS_BOUND,
    ClassificationReport,
    TargetState,
    classify,
    fidelity_mixed,
    fidelity_pure,
    ghz_state,
    optimize_w_phases,
    w_state,
)
from .errors import (
    AlreadyTransformedError,
    ConfigError,
    CountsParseError,
    IdentangleError,
    IncompleteSettingsError,
    PostselectionImpossibleError,
    UnsupportedConfigurationError,
    ValidationError,
)
from .expansion import (
    UNROUTED,
    ExpandedState,
    ProductTerm,
    SingleParticleKet,
    amplitude_of,
    apply_transform,
    initial_state,
    term_count,
)
from .reduction import (
    DelayModel,
    DetectorTerm,
    GramMatrix,
    PostselectedState,
    density_matrix_from_spec,
    gram_from_delays,
    gram_from_labels,
    postselect_no_bunching,
    trace_distinguishability,
)
from .tomography import (
    CountRow,
    CountsTable,
    all_pauli_settings,
    axis_eigenvectors,
    born_probabilities,
    exact_counts,
    log_likelihood,
    read_counts,
    reconstruct_linear,
    reconstruct_mle,
    simulate_counts,
    write_counts,
)
from .transform import (
    UNUSED,
    GHZParams,
    Spin,
    TransformSpec,
    balanced_ghz_params,
    balanced_tritter_rows,
    custom_spec,
    dft_tritter_rows,
    ghz_preset,
    w_preset,
)

__all__ = [
    "__version__",
    "AlreadyTransformedError",
    "ClassificationReport",
    "ConfigError",
    "CountRow",
    "CountsParseError",
    "CountsTable",
    "DelayModel",
    "DensityMatrix",
    "DetectorTerm",
    "ExpandedState",
    "GHZParams",
    "GHZ_WITNESS_BOUND",
    "GramMatrix",
    "IdentangleError",
    "IncompleteSettingsError",
    "PostselectedState",
    "PostselectionImpossibleError",
    "ProductTerm",
    "SingleParticleKet",
    "Spin",
    "TargetState",
    "TransformSpec",
    "UNROUTED",
    "UNUSED",
    "UnsupportedConfigurationError",
    "VERDICT_GHZ",
    "VERDICT_INCONCLUSIVE",
    "VERDICT_W",
    "ValidationError",
    "W_WITNESS_BOUND",
    "all_pauli_settings",
    "amplitude_of",
    "apply_transform",
    "axis_eigenvectors",
    "balanced_ghz_params",
    "balanced_tritter_rows",
    "born_probabilities",
    "brute_density_matrix",
    "classify",
    "custom_spec",
    "density_matrix_from_spec",
    "dft_tritter_rows",
    "exact_counts",
    "fidelity_mixed",
    "fidelity_pure",
    "ghz_preset",
    "ghz_state",
    "gram_from_delays",
    "gram_from_labels",
    "initial_state",
    "log_likelihood",
    "optimize_w_phases",
    "permanent",
    "postselect_no_bunching",
    "read_counts",
    "reconstruct_linear",
    "reconstruct_mle",
    "simulate_counts",
    "spin_pattern_index",
    "term_count",
    "trace_distinguishability",
    "w_preset",
    "w_state",
    "write_counts",
]
