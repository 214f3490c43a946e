"""Heralded parametric-amplifier circuits on truncated Fock spaces."""

from .heralding import DetectionPattern, HeraldOutcome, outcome_distribution, project
from .protocols import (
    GateParams,
    InputCoefficients,
    ProtocolResult,
    fidelity,
    fix_global_phase,
    optimize_teleport_success,
    run_nls,
    run_qubit_teleport,
    run_qutrit_teleport,
    solve_nls_params,
    solve_teleport_constraint,
    sweep,
)
from .squeezers import (
    PdcSpec,
    SqueezerSpec,
    apply_squeezer_taylor_oracle,
    apply_two_mode_squeezer,
    apply_type2_pdc,
    squeezer_matrix_element,
)
from .states import (
    CutoffExceededError,
    FockError,
    ModeLabel,
    ModeMismatchError,
    PureState,
    ZeroNormError,
    inner_product,
    make_basis_state,
    normalize,
    superpose,
    tensor,
    vacuum_state,
)

__version__ = "0.1.0"

__all__ = [
    "CutoffExceededError",
    "DetectionPattern",
    "FockError",
    "GateParams",
    "HeraldOutcome",
    "InputCoefficients",
    "ModeLabel",
    "ModeMismatchError",
    "PdcSpec",
    "ProtocolResult",
    "PureState",
    "SqueezerSpec",
    "ZeroNormError",
    "apply_squeezer_taylor_oracle",
    "apply_two_mode_squeezer",
    "apply_type2_pdc",
    "fidelity",
    "fix_global_phase",
    "inner_product",
    "make_basis_state",
    "normalize",
    "optimize_teleport_success",
    "outcome_distribution",
    "project",
    "run_nls",
    "run_qubit_teleport",
    "run_qutrit_teleport",
    "solve_nls_params",
    "solve_teleport_constraint",
    "squeezer_matrix_element",
    "superpose",
    "sweep",
    "tensor",
    "vacuum_state",
]
