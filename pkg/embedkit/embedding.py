from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from embedkit.error import EmptySampleSet, OnManifoldSample
from embedkit.linalg import Vector
from embedkit.ode import FlowField, Trace

logger = logging.getLogger(__name__)

MANIFOLD_GUARD = 1e-14

AmbientField = Callable[[Vector, Vector], Vector]
ConstraintFn = Callable[[Vector], float]
GradientFn = Callable[[Vector], Vector]
OutputFn = Callable[[Vector], Vector]


@dataclass(frozen=True)
class EmbeddedSystem:
    """A control system on a submanifold M = V^{-1}(0) extended to the ambient
    space, with states flattened row-major."""

    ambient_dim: int
    control_dim: int
    output_dim: int
    ambient_field: AmbientField
    constraint: ConstraintFn
    gradient: GradientFn
    output: OutputFn

    def with_gradient(self, gradient: GradientFn) -> EmbeddedSystem:
        return replace(self, gradient=gradient)


@dataclass(frozen=True)
class ControlledField:
    dimension: int
    rhs: AmbientField

    def __call__(self, x: Vector, u: Vector) -> Vector:
        return self.rhs(x, u)

    def driven_by(self, control: Callable[[float, Vector], Vector]) -> FlowField:
        return FlowField(self.dimension, lambda t, x: self.rhs(x, control(t, x)))


@dataclass(frozen=True)
class TangencyReport:
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


@dataclass(frozen=True)
class DecayReport:
    b: float
    slack: float
    worst_ratio: float
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class GradientReport:
    max_relative_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tolerance


def extended_field(system: EmbeddedSystem) -> ControlledField:
    def rhs(x: Vector, u: Vector) -> Vector:
        return system.ambient_field(x, u) - system.gradient(x)

    return ControlledField(system.ambient_dim, rhs)


def check_tangency(
    system: EmbeddedSystem,
    samples: Iterable[tuple[Vector, Vector]],
    tol: float,
) -> TangencyReport:
    residual = 0.0
    for x, u in samples:
        value = abs(float(np.dot(system.gradient(x), system.ambient_field(x, u))))
        residual = max(residual, value)

    return TangencyReport(residual, tol)


def estimate_decay_constant(
    system: EmbeddedSystem,
    sublevel_r: float,
    samples: Iterable[Vector],
) -> float:
    ratios: list[float] = []
    rejected = 0
    for x in samples:
        value = system.constraint(x)
        if value < MANIFOLD_GUARD:
            raise OnManifoldSample(value)
        if value >= sublevel_r:
            rejected += 1
            continue
        gradient = system.gradient(x)
        ratios.append(float(np.dot(gradient, gradient)) / value)

    if not ratios:
        raise EmptySampleSet()

    logger.debug(
        "decay constant from %d samples (%d outside sublevel %.3g)",
        len(ratios),
        rejected,
        sublevel_r,
    )

    return min(ratios)


def verify_exponential_decay(
    trace: Trace,
    vfn: ConstraintFn,
    b: float,
    slack: float,
) -> DecayReport:
    values = trace.norms(vfn)
    initial = float(values[0])
    worst = 0.0
    violations = 0
    for t, value in zip(trace.times, values):
        bound = initial * math.exp(-b * (float(t) - float(trace.times[0])))
        if value > bound * (1.0 + slack):
            violations += 1
        if bound > 0.0:
            worst = max(worst, float(value) / bound)
        elif value > 0.0:
            worst = math.inf

    return DecayReport(b, slack, worst, violations)


def gradient_check(
    system: EmbeddedSystem,
    samples: Sequence[Vector],
    fd_step: float,
    tolerance: float = 1e-5,
) -> GradientReport:
    if not 1e-8 <= fd_step <= 1e-4:
        raise ValueError(f"finite-difference step {fd_step} outside [1e-8, 1e-4]")

    worst = 0.0
    for x in samples:
        analytic = system.gradient(x)
        numeric = central_difference(system.constraint, x, fd_step)
        scale = max(float(np.max(np.abs(analytic))), float(np.max(np.abs(numeric))))
        if scale == 0.0:
            continue
        worst = max(worst, float(np.max(np.abs(analytic - numeric))) / scale)

    return GradientReport(worst, tolerance)


def central_difference(fn: ConstraintFn, x: Vector, step: float) -> Vector:
    gradient = np.zeros_like(x, dtype=float)
    for i in range(len(x)):
        forward = np.array(x, dtype=float)
        backward = np.array(x, dtype=float)
        forward[i] += step
        backward[i] -= step
        gradient[i] = (fn(forward) - fn(backward)) / (2.0 * step)

    return gradient
