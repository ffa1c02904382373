from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from embedkit.embedding import EmbeddedSystem
from embedkit.error import DomainWarning
from embedkit.linalg import Mat3, Vec3, Vector, cross, frob_norm, hat
from embedkit.rigidbody.inertia import Inertia

STATE_DIM = 12


@dataclass(frozen=True, eq=False)
class RigidBodyState:
    """(R, Omega) in R^{3x3} x R^3; R is not constrained to SO(3)."""

    r: Mat3
    omega: Vec3

    @classmethod
    def from_vector(cls, x: Vector) -> RigidBodyState:
        return cls(x[:9].reshape(3, 3), x[9:12])

    def as_vector(self) -> Vector:
        return np.concatenate([self.r.ravel(), self.omega])

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.r))


def dynamics(s: RigidBodyState, u: Vec3, inertia: Inertia) -> RigidBodyState:
    momentum = inertia.matrix @ s.omega

    return RigidBodyState(
        s.r @ hat(s.omega),
        inertia.inverse @ (cross(momentum, s.omega) + u),
    )


def extended_dynamics(
    s: RigidBodyState, u: Vec3, inertia: Inertia, k_e: float
) -> RigidBodyState:
    determinant = s.determinant
    if determinant <= 0.0:
        warnings.warn(
            f"det R = {determinant:.6g} outside GL+(3)", DomainWarning, stacklevel=2
        )

    base = dynamics(s, u, inertia)

    return RigidBodyState(base.r - grad_v(s.r, k_e), base.omega)


def v_tilde(r: Mat3, k_e: float) -> float:
    return 0.25 * k_e * frob_norm(r.T @ r - np.eye(3)) ** 2


def grad_v(r: Mat3, k_e: float) -> Mat3:
    return k_e * r @ (r.T @ r - np.eye(3))


def embedded_system(inertia: Inertia, k_e: float) -> EmbeddedSystem:
    def ambient_field(x: Vector, u: Vector) -> Vector:
        return dynamics(RigidBodyState.from_vector(x), u, inertia).as_vector()

    def constraint(x: Vector) -> float:
        return v_tilde(x[:9].reshape(3, 3), k_e)

    def gradient(x: Vector) -> Vector:
        return np.concatenate([grad_v(x[:9].reshape(3, 3), k_e).ravel(), np.zeros(3)])

    def output(x: Vector) -> Vector:
        return np.array(x[:9], dtype=float)

    return EmbeddedSystem(
        ambient_dim=STATE_DIM,
        control_dim=3,
        output_dim=9,
        ambient_field=ambient_field,
        constraint=constraint,
        gradient=gradient,
        output=output,
    )
