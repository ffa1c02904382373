from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from embedkit.error import ConstructionFailure
from embedkit.linalg import Mat3, Vec3, cross, frob_norm, hat, rodrigues_exp
from embedkit.rigidbody.inertia import PAPER_INERTIA, Inertia

ORTHOGONALITY_TOLERANCE = 1e-9
KINEMATICS_TOLERANCE = 1e-5
CONTROL_TOLERANCE = 1e-9
VALIDATION_POINTS = 200


@dataclass(frozen=True)
class ReferenceSample:
    t: float
    r0: Mat3
    omega0: Vec3
    domega0: Vec3
    u0: Vec3


@dataclass(frozen=True)
class RigidReference:
    r0: Callable[[float], Mat3]
    omega0: Callable[[float], Vec3]
    domega0: Callable[[float], Vec3]
    u0: Callable[[float], Vec3]
    period: float | None = None

    def at(self, t: float) -> ReferenceSample:
        return ReferenceSample(
            t, self.r0(t), self.omega0(t), self.domega0(t), self.u0(t)
        )

    def validated(
        self, inertia: Inertia, *, span: float = 2 * math.pi
    ) -> RigidReference:
        horizon = self.period or span
        step = 1e-5
        for t in np.linspace(0.0, horizon, VALIDATION_POINTS):
            sample = self.at(float(t))
            drift = frob_norm(sample.r0.T @ sample.r0 - np.eye(3))
            if drift > ORTHOGONALITY_TOLERANCE:
                raise ConstructionFailure("R0 orthogonal", float(t), drift)

            rate = (self.r0(float(t) + step) - self.r0(float(t) - step)) / (2 * step)
            mismatch = frob_norm(rate - sample.r0 @ hat(sample.omega0))
            if mismatch > KINEMATICS_TOLERANCE:
                raise ConstructionFailure("dR0 = R0 hat(Omega0)", float(t), mismatch)

            expected = required_control(sample.omega0, sample.domega0, inertia)
            gap = float(np.max(np.abs(sample.u0 - expected)))
            if gap > CONTROL_TOLERANCE:
                raise ConstructionFailure("u0 consistency", float(t), gap)

        return self


def required_control(omega0: Vec3, domega0: Vec3, inertia: Inertia) -> Vec3:
    """u0 = I dOmega0 - (I Omega0) x Omega0."""
    return inertia.matrix @ domega0 - cross(inertia.matrix @ omega0, omega0)


def paper_reference(inertia: Inertia | None = None) -> RigidReference:
    body = inertia or Inertia.diagonal(*PAPER_INERTIA)
    closed_form = np.allclose(body.matrix, np.diag(PAPER_INERTIA))

    def u0(t: float) -> Vec3:
        if closed_form:
            return _paper_control(t)
        return required_control(_paper_omega(t), _paper_domega(t), body)

    return RigidReference(
        r0=_paper_attitude,
        omega0=_paper_omega,
        domega0=_paper_domega,
        u0=u0,
        period=2 * math.pi,
    ).validated(body)


def constant_reference(omega: Vec3, inertia: Inertia) -> RigidReference:
    w = np.array(omega, dtype=float)
    speed = float(np.linalg.norm(w))
    axis = w / speed if speed > 0 else np.array([1.0, 0.0, 0.0])
    u = required_control(w, np.zeros(3), inertia)

    return RigidReference(
        r0=lambda t: rodrigues_exp(axis, speed * t),
        omega0=lambda t: w.copy(),
        domega0=lambda t: np.zeros(3),
        u0=lambda t: u.copy(),
    ).validated(inertia)


def _paper_attitude(t: float) -> Mat3:
    c, s = math.cos(t), math.sin(t)

    return np.array(
        [
            [c * c, -s, c * s],
            [s * s + c * c * s, c * c, c * s * s - c * s],
            [c * s * s - c * s, c * s, c * c + s * s * s],
        ]
    )


def _paper_omega(t: float) -> Vec3:
    c, s = math.cos(t), math.sin(t)

    return np.array([c * c - s, 1.0 - s, (1.0 + s) * c])


def _paper_domega(t: float) -> Vec3:
    c, s = math.cos(t), math.sin(t)

    return np.array([-c * (2.0 * s + 1.0), -c, c * c - s - s * s])


def _paper_control(t: float) -> Vec3:
    c, s = math.cos(t), math.sin(t)

    return np.array(
        [
            -(3.0 + 6.0 * s + c * c) * c,
            -2.0 * (2.0 + s) * c * s * s,
            -(2.0 * s - c * c) * s,
        ]
    )
