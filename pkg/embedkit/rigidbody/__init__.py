from embedkit.rigidbody.controller import (
    ControllerGains,
    full_state_controller,
    linear_gain,
    observer_based_controller,
    tracking_control,
)
from embedkit.rigidbody.dynamics import (
    STATE_DIM,
    RigidBodyState,
    dynamics,
    embedded_system,
    extended_dynamics,
    grad_v,
    v_tilde,
)
from embedkit.rigidbody.inertia import PAPER_INERTIA, Inertia
from embedkit.rigidbody.observer import (
    nonkalman_gain,
    nonkalman_gain_at,
    nonlinear_state_observer_rhs,
    nonlinear_state_observer_rhs_at,
    tracking_error_observer_rhs,
)
from embedkit.rigidbody.reference import (
    ReferenceSample,
    RigidReference,
    constant_reference,
    paper_reference,
    required_control,
)
from embedkit.rigidbody.tracking import (
    OUTPUT_MATRIX,
    ErrorCoords,
    error_coords,
    error_coords_at,
    input_matrix,
    linearized_a,
    linearized_model,
    measured_outputs,
    measured_outputs_at,
    symmetric_error_rate,
)

__all__ = [
    "OUTPUT_MATRIX",
    "PAPER_INERTIA",
    "STATE_DIM",
    "ControllerGains",
    "ErrorCoords",
    "Inertia",
    "ReferenceSample",
    "RigidBodyState",
    "RigidReference",
    "constant_reference",
    "dynamics",
    "embedded_system",
    "error_coords",
    "error_coords_at",
    "extended_dynamics",
    "full_state_controller",
    "grad_v",
    "input_matrix",
    "linear_gain",
    "linearized_a",
    "linearized_model",
    "measured_outputs",
    "measured_outputs_at",
    "nonkalman_gain",
    "nonkalman_gain_at",
    "nonlinear_state_observer_rhs",
    "nonlinear_state_observer_rhs_at",
    "observer_based_controller",
    "paper_reference",
    "required_control",
    "symmetric_error_rate",
    "tracking_control",
    "tracking_error_observer_rhs",
    "v_tilde",
]
