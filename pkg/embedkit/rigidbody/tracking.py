from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from embedkit.linalg import (
    Mat3,
    Matrix,
    Vec3,
    Vector,
    commutator,
    hat,
    skew_vee,
    sym,
)
from embedkit.ltv import LtvModel
from embedkit.rigidbody.dynamics import RigidBodyState
from embedkit.rigidbody.inertia import Inertia
from embedkit.rigidbody.reference import ReferenceSample, RigidReference

BOUND_SAMPLES = 256

OUTPUT_MATRIX = np.hstack([np.eye(3), np.zeros((3, 3))])


@dataclass(frozen=True, eq=False)
class ErrorCoords:
    z_s: Mat3
    z_k_vee: Vec3
    d_omega: Vec3

    def reduced(self) -> Vector:
        """(Z_k^vee, dOmega), the coordinates the observer estimates."""
        return np.concatenate([self.z_k_vee, self.d_omega])


def error_coords(s: RigidBodyState, ref: RigidReference, t: float) -> ErrorCoords:
    return error_coords_at(s, ref.at(t))


def error_coords_at(s: RigidBodyState, sample: ReferenceSample) -> ErrorCoords:
    z = sample.r0.T @ (s.r - sample.r0)

    return ErrorCoords(sym(z), skew_vee(z), s.omega - sample.omega0)


def measured_outputs(y: Mat3, ref: RigidReference, t: float) -> tuple[Mat3, Vec3]:
    return measured_outputs_at(y, ref.at(t))


def measured_outputs_at(y: Mat3, sample: ReferenceSample) -> tuple[Mat3, Vec3]:
    z = sample.r0.T @ (y - sample.r0)

    return sym(z), skew_vee(z)


def euler_block(omega0: Vec3, inertia: Inertia) -> Mat3:
    """I^{-1}(hat(I Omega0) - hat(Omega0) I)."""
    body = inertia.matrix

    return inertia.inverse @ (hat(body @ omega0) - hat(omega0) @ body)


def symmetric_error_rate(z_s: Mat3, omega0: Vec3, k_e: float) -> Mat3:
    """Linear part of the Z_s flow. It does not see (Z_k, dOmega) or the input."""
    return commutator(z_s, hat(omega0)) - 2.0 * k_e * z_s


def linearized_a(omega0: Vec3, inertia: Inertia) -> Matrix:
    return np.block(
        [
            [-hat(omega0), np.eye(3)],
            [np.zeros((3, 3)), euler_block(omega0, inertia)],
        ]
    )


def input_matrix(inertia: Inertia) -> Matrix:
    return np.vstack([np.zeros((3, 3)), inertia.inverse])


def linearized_model(ref: RigidReference, inertia: Inertia) -> LtvModel:
    b = input_matrix(inertia)

    def a(t: float) -> Matrix:
        return linearized_a(ref.omega0(t), inertia)

    bound = None
    if ref.period is not None:
        grid = np.linspace(0.0, ref.period, BOUND_SAMPLES)
        bound = max(float(np.linalg.norm(a(float(t)), 2)) for t in grid)

    return LtvModel(
        state_dim=6,
        control_dim=3,
        output_dim=3,
        a=a,
        b=lambda t: b,
        c=lambda t: OUTPUT_MATRIX,
        a_bound=bound,
        period=ref.period,
    )
