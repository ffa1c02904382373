from embedkit.ltv.analysis import DecayFit, composite_matrix, decay_rate_fit, fit_decay
from embedkit.ltv.model import (
    Completeness,
    LtvModel,
    UniformCertificate,
    check_uniform_complete,
    controllability_gramian,
    observability_gramian,
    period_grid,
    transition_matrix,
)
from embedkit.ltv.riccati import (
    RiccatiSchedule,
    gain_stiffness,
    integrate_riccati,
    kalman_gain,
    riccati_rate,
    riccati_rhs,
    riccati_stiffness,
    weight_inverse,
)

__all__ = [
    "Completeness",
    "DecayFit",
    "LtvModel",
    "RiccatiSchedule",
    "UniformCertificate",
    "check_uniform_complete",
    "composite_matrix",
    "controllability_gramian",
    "decay_rate_fit",
    "fit_decay",
    "gain_stiffness",
    "integrate_riccati",
    "kalman_gain",
    "observability_gramian",
    "period_grid",
    "riccati_rate",
    "riccati_rhs",
    "riccati_stiffness",
    "transition_matrix",
    "weight_inverse",
]
