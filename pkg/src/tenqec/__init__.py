"""Stabilizer codes from contracted code tensors, with exact decoding."""

from .decoder import (
    DecodeResult,
    LikelihoodTable,
    NoiseModel,
    OpCounter,
    decode,
    leaf_probabilities,
    likelihoods_direct,
    likelihoods_network,
)
from .harness import (
    McPoint,
    ThresholdFit,
    crossing_point,
    fit_threshold,
    read_points,
    run_mc,
    run_point,
    write_points,
)
from .holographic import (
    HolographicLayout,
    LayoutNode,
    build_layout,
    chain_layout,
    chain_schedule,
    predicted_op_count,
    schedule_for,
)
from .oracle import (
    DuplicateEntryError,
    ExhaustiveDecoder,
    exhaustive_contract,
    exhaustive_failure_rate,
    exhaustive_likelihoods,
)
from .pauli import PauliString
from .stabilizer import (
    DependentGeneratorsError,
    StabilizerCode,
    Syndrome,
    code_from_json_dict,
    code_to_json_dict,
    six_qubit_code,
    seven_qubit_state,
    solve_pure_errors,
    spans_same_group,
)
from .tensor import (
    CodeTensor,
    ContractionPreconditionError,
    LegBinding,
    class_labels,
    contract,
)

__version__ = "0.1.0"

__all__ = [
    "CodeTensor",
    "ContractionPreconditionError",
    "DecodeResult",
    "DependentGeneratorsError",
    "DuplicateEntryError",
    "ExhaustiveDecoder",
    "HolographicLayout",
    "LayoutNode",
    "LegBinding",
    "LikelihoodTable",
    "McPoint",
    "NoiseModel",
    "OpCounter",
    "PauliString",
    "StabilizerCode",
    "Syndrome",
    "ThresholdFit",
    "build_layout",
    "chain_layout",
    "chain_schedule",
    "code_from_json_dict",
    "code_to_json_dict",
    "class_labels",
    "contract",
    "crossing_point",
    "decode",
    "exhaustive_contract",
    "exhaustive_failure_rate",
    "exhaustive_likelihoods",
    "fit_threshold",
    "leaf_probabilities",
    "likelihoods_direct",
    "likelihoods_network",
    "predicted_op_count",
    "read_points",
    "run_mc",
    "run_point",
    "schedule_for",
    "seven_qubit_state",
    "six_qubit_code",
    "solve_pure_errors",
    "spans_same_group",
    "write_points",
]
