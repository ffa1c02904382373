from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from embedkit.error import InvalidGainMatrix
from embedkit.linalg import Mat3, Matrix, Vec3, Vector, cross, hat, is_spd
from embedkit.rigidbody.inertia import Inertia
from embedkit.rigidbody.reference import ReferenceSample, RigidReference
from embedkit.rigidbody.tracking import ErrorCoords


@dataclass(frozen=True, eq=False)
class ControllerGains:
    k_p: float
    k_d: Mat3
    k_e: float

    def __post_init__(self) -> None:
        if self.k_p <= 0:
            raise InvalidGainMatrix("k_P", "must be positive")
        if not is_spd(self.k_d):
            raise InvalidGainMatrix("K_D")
        if self.k_e <= 0:
            raise InvalidGainMatrix("k_e", "must be positive")

    @classmethod
    def paper(cls) -> ControllerGains:
        return cls(4.0, 4.0 * np.eye(3), 1.0)


def observer_based_controller(
    z_o: Vector,
    ref: RigidReference,
    t: float,
    inertia: Inertia,
    gains: ControllerGains,
) -> Vec3:
    return tracking_control(z_o[:3], z_o[3:], ref.at(t), inertia, gains)


def full_state_controller(
    ec: ErrorCoords,
    ref: RigidReference,
    t: float,
    inertia: Inertia,
    gains: ControllerGains,
) -> Vec3:
    return tracking_control(ec.z_k_vee, ec.d_omega, ref.at(t), inertia, gains)


def tracking_control(
    z_k_vee: Vec3,
    d_omega: Vec3,
    sample: ReferenceSample,
    inertia: Inertia,
    gains: ControllerGains,
) -> Vec3:
    body = inertia.matrix

    return (
        sample.u0
        - cross(body @ d_omega, sample.omega0)
        - cross(body @ sample.omega0, d_omega)
        - body @ (gains.k_p * z_k_vee + gains.k_d @ d_omega)
    )


def linear_gain(omega0: Vec3, inertia: Inertia, gains: ControllerGains) -> Matrix:
    """K with du = -K (Z_k^vee, dOmega) for the controller above."""
    body = inertia.matrix

    return np.hstack(
        [
            gains.k_p * body,
            body @ gains.k_d + hat(body @ omega0) - hat(omega0) @ body,
        ]
    )
