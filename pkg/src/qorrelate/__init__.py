"""Bipartite quantum correlations and their monogamy in n-qubit pure states.

The package computes entanglement measures (concurrence, entanglement of
formation, negativity, logarithmic negativity) and measurement-based
correlations (quantum discord, one-way quantum work deficit) for two-qubit
states and nodal-vs-rest cuts of pure states, assembles them into monogamy
scores, and estimates the fraction of random ensembles that satisfies
monogamy.  Everything is deterministic and seed-reproducible.
"""

__version__ = "0.1.0"

from .linalg import (
    DensityMatrix,
    InvalidSubsetError,
    NotHermitianError,
    binary_entropy,
    hermitian_eigvals,
    hermiticity_defect,
    matrix_sqrt_psd,
    partial_trace,
    partial_transpose,
    trace_norm_hermitian,
    von_neumann_entropy,
)
from .states import (
    EnsembleSpec,
    Family,
    PureState,
    dicke_pair_rdm,
    dicke_single_rdm,
    dicke_state,
    generalized_dicke_random,
    ghz_state,
    haar_random_pure,
    mix_seed,
    symmetric_random,
    w_state,
)
from .measures import (
    Direction,
    MeasureKind,
    MeasurementBasis,
    OptimizerOptions,
    concurrence_pure_cut,
    concurrence_two_qubit,
    discord_and_deficit,
    eof_from_concurrence,
    log_negativity,
    measured_conditional_entropy,
    mutual_information,
    negativity,
    pure_cut_value,
    quantum_discord,
    unmeasured_conditional_entropy,
    work_deficit_one_way,
)
from .dicke import (
    DickeParams,
    dicke_discord_score,
    dicke_params,
    dicke_tangle,
    dicke_workdeficit_score,
)
from .monogamy import (
    InvariantViolation,
    MonogamyRecord,
    PercentageRow,
    ScalingFit,
    Theorem4Check,
    eof_discord_chain_gap,
    evaluate_state,
    koashi_winter_gap,
    monogamy_score,
    percentage_table,
    scaling_fit,
    tangle,
    theorem4_bound_check,
)

__all__ = [
    "__version__",
    "DensityMatrix", "InvalidSubsetError", "NotHermitianError",
    "binary_entropy", "hermitian_eigvals", "hermiticity_defect",
    "matrix_sqrt_psd", "partial_trace", "partial_transpose",
    "trace_norm_hermitian", "von_neumann_entropy",
    "EnsembleSpec", "Family", "PureState",
    "dicke_pair_rdm", "dicke_single_rdm", "dicke_state",
    "generalized_dicke_random", "ghz_state", "haar_random_pure",
    "mix_seed", "symmetric_random", "w_state",
    "Direction", "MeasureKind", "MeasurementBasis", "OptimizerOptions",
    "concurrence_pure_cut", "concurrence_two_qubit", "discord_and_deficit",
    "eof_from_concurrence", "log_negativity", "measured_conditional_entropy",
    "mutual_information", "negativity", "pure_cut_value", "quantum_discord",
    "unmeasured_conditional_entropy", "work_deficit_one_way",
    "DickeParams", "dicke_discord_score", "dicke_params", "dicke_tangle",
    "dicke_workdeficit_score",
    "InvariantViolation", "MonogamyRecord", "PercentageRow", "ScalingFit",
    "Theorem4Check", "eof_discord_chain_gap", "evaluate_state",
    "koashi_winter_gap", "monogamy_score", "percentage_table", "scaling_fit",
    "tangle", "theorem4_bound_check",
]
