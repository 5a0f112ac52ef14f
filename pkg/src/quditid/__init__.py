"""Optimal unambiguous identification of unknown pure qudit states.

The register holds one probe qudit and d reference qudits, each of
dimension d.  This package constructs the measurement that identifies
which reference the probe matches without ever misidentifying it,
verifies its algebra (completeness, positivity, zero cross-talk,
closed-form success probability), re-derives the optimal element scale
in an independent abstract representation, and simulates the experiment
with reproducible per-trial random streams.
"""

from .analytics import (
    ConfusionMatrix,
    closed_form_success,
    confusion,
    success_from_weights,
    success_probability,
    sym_block_trace,
    verify_report,
)
from .detection import (
    LowRankPovmElement,
    Povm,
    build_detection_core,
    build_povm,
    build_povm_vector,
    overlap_with_product,
    povm_from_dict,
    povm_to_dict,
)
from .montecarlo import (
    INCONCLUSIVE,
    ExperimentReport,
    TrialRecord,
    outcome_probabilities,
    run_experiment,
    run_trial,
    sample_haar,
    trial_stream,
)
from .state_ops import (
    HermitianOperator,
    build_asym_projector,
    build_rho,
    build_sym_projector,
    haar_average_check,
    identity_operator,
    operator_from_dict,
    operator_to_dict,
)
from .sym_optimizer import (
    SymmetricFamily,
    build_symmetric_family,
    frame_operator,
    optimal_weight_eigen,
    optimal_weight_grid,
)
from .tensor_core import (
    StateVector,
    basis_ket,
    decode_index,
    encode_index,
    haar_state,
    inner_product,
    product_state,
    state_from_dict,
    state_to_dict,
    total_dim,
    total_excitation,
)

__version__ = "0.1.0"

__all__ = [
    "ConfusionMatrix",
    "ExperimentReport",
    "HermitianOperator",
    "INCONCLUSIVE",
    "LowRankPovmElement",
    "Povm",
    "StateVector",
    "SymmetricFamily",
    "TrialRecord",
    "basis_ket",
    "build_asym_projector",
    "build_detection_core",
    "build_povm",
    "build_povm_vector",
    "build_rho",
    "build_sym_projector",
    "build_symmetric_family",
    "closed_form_success",
    "confusion",
    "decode_index",
    "encode_index",
    "frame_operator",
    "haar_average_check",
    "haar_state",
    "identity_operator",
    "inner_product",
    "operator_from_dict",
    "operator_to_dict",
    "optimal_weight_eigen",
    "optimal_weight_grid",
    "outcome_probabilities",
    "overlap_with_product",
    "povm_from_dict",
    "povm_to_dict",
    "product_state",
    "run_experiment",
    "run_trial",
    "sample_haar",
    "state_from_dict",
    "state_to_dict",
    "success_from_weights",
    "success_probability",
    "sym_block_trace",
    "total_dim",
    "total_excitation",
    "trial_stream",
    "verify_report",
]
