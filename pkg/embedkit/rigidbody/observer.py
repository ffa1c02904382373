from __future__ import annotations

import numpy as np

from embedkit.error import InvalidGainMatrix
from embedkit.linalg import Mat3, Matrix, Vec3, Vector, hat, is_spd, skew_vee
from embedkit.rigidbody.dynamics import RigidBodyState, extended_dynamics
from embedkit.rigidbody.inertia import Inertia
from embedkit.rigidbody.reference import ReferenceSample, RigidReference
from embedkit.rigidbody.tracking import OUTPUT_MATRIX, euler_block


def tracking_error_observer_rhs(
    z_o: Vector,
    du: Vec3,
    dy_k: Vec3,
    a: Matrix,
    b: Matrix,
    gain: Matrix,
) -> Vector:
    """dz_o = A z_o + B du - L (C z_o - dy_k).

    The innovation enters with a minus sign; with L = P C^T R^{-1} and P > 0
    only this sign gives stable observation-error dynamics.
    """
    return a @ z_o + b @ du - gain @ (OUTPUT_MATRIX @ z_o - dy_k)


def nonkalman_gain(
    ref: RigidReference,
    t: float,
    inertia: Inertia,
    m1: Mat3,
    m2: Mat3,
) -> Matrix:
    if not is_spd(m1):
        raise InvalidGainMatrix("M1")
    if not is_spd(m2):
        raise InvalidGainMatrix("M2")

    return nonkalman_gain_at(ref.at(t), inertia, m1, m2)


def nonkalman_gain_at(
    sample: ReferenceSample, inertia: Inertia, m1: Mat3, m2: Mat3
) -> Matrix:
    omega_hat = hat(sample.omega0)
    l1 = first_block(sample.omega0, inertia, m1)
    shifted = omega_hat + l1
    l2 = (
        -(hat(sample.domega0) + first_block_rate(sample.domega0, inertia))
        + shifted @ shifted
        - m1 @ shifted
        + m2
    )

    return np.vstack([l1, l2])


def first_block(omega0: Vec3, inertia: Inertia, m1: Mat3) -> Mat3:
    """L1 = -hat(Omega0) + I^{-1}(hat(I Omega0) - hat(Omega0) I) + M1."""
    return -hat(omega0) + euler_block(omega0, inertia) + m1


def first_block_rate(domega0: Vec3, inertia: Inertia) -> Mat3:
    """dL1/dt; L1 is affine in Omega0 so only dOmega0 enters."""
    return -hat(domega0) + euler_block(domega0, inertia)


def nonlinear_state_observer_rhs(
    xhat: Vector,
    u: Vec3,
    y: Mat3,
    gain: Matrix,
    ref: RigidReference,
    t: float,
    inertia: Inertia,
    k_e: float,
) -> Vector:
    return nonlinear_state_observer_rhs_at(xhat, u, y, gain, ref.at(t), inertia, k_e)


def nonlinear_state_observer_rhs_at(
    xhat: Vector,
    u: Vec3,
    y: Mat3,
    gain: Matrix,
    sample: ReferenceSample,
    inertia: Inertia,
    k_e: float,
) -> Vector:
    """Copy of the extended plant corrected by the reduced innovation
    Skew(R0^T (R_hat - y))^vee, with L applied blockwise: L1 on the attitude
    error expressed in the reference frame, L2 on the body rate."""
    estimate = RigidBodyState.from_vector(xhat)
    innovation = skew_vee(sample.r0.T @ (estimate.r - y))
    base = extended_dynamics(estimate, u, inertia, k_e)

    return np.concatenate(
        [
            (base.r - sample.r0 @ hat(gain[:3] @ innovation)).ravel(),
            base.omega - gain[3:] @ innovation,
        ]
    )
