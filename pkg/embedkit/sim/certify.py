from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from embedkit.embedding import (
    check_tangency,
    estimate_decay_constant,
    extended_field,
    gradient_check,
    verify_exponential_decay,
)
from embedkit.ltv import Completeness, check_uniform_complete, period_grid
from embedkit.ode import integrate
from embedkit.rigidbody import embedded_system, linearized_model
from embedkit.rigidbody.sampling import (
    gl_plus_samples,
    random_rotation,
    sublevel_samples,
    tangency_samples,
)
from embedkit.sim.record import format_float
from embedkit.sim.scenario import Scenario

logger = logging.getLogger(__name__)

DECAY_TRAJECTORIES = 10
CHECK_POINTS = 100
CONFORMAL_SCALE = 1.05


class Certificate(Enum):
    uco = "uco"
    ucc = "ucc"
    decay = "decay"
    gradient = "gradient"
    tangency = "tangency"


@dataclass
class CertifyReport:
    which: Certificate
    passed: bool = False
    entries: dict[str, str] = field(default_factory=dict)

    def with_entry(self, key: str, value: float | int | bool | str) -> CertifyReport:
        if isinstance(value, bool):
            self.entries[key] = "true" if value else "false"
        elif isinstance(value, float):
            self.entries[key] = format_float(value)
        else:
            self.entries[key] = str(value)

        return self

    def and_entry(self, key: str, value: float | int | bool | str) -> CertifyReport:
        return self.with_entry(key, value)

    def concluded(self, passed: bool) -> CertifyReport:
        self.passed = passed

        return self

    def lines(self) -> list[str]:
        head = [f"certificate={self.which.value}"]
        tail = [f"passed={'true' if self.passed else 'false'}"]

        return head + [f"{key}={value}" for key, value in self.entries.items()] + tail

    def write(self, directory: Path) -> Path:
        path = directory / f"certify_{self.which.value}.txt"
        path.write_text("\n".join(self.lines()) + "\n", encoding="utf-8")

        return path


def certify(scenario: Scenario, which: Certificate) -> CertifyReport:
    handler = {
        Certificate.uco: certify_observability,
        Certificate.ucc: certify_controllability,
        Certificate.decay: certify_decay,
        Certificate.gradient: certify_gradient,
        Certificate.tangency: certify_tangency,
    }[which]
    report = handler(scenario)
    logger.info(
        "certificate %s %s", which.value, "passed" if report.passed else "failed"
    )

    return report


def certify_observability(scenario: Scenario) -> CertifyReport:
    return _uniform(scenario, Certificate.uco, Completeness.observability)


def certify_controllability(scenario: Scenario) -> CertifyReport:
    return _uniform(scenario, Certificate.ucc, Completeness.controllability)


def _uniform(
    scenario: Scenario, which: Certificate, completeness: Completeness
) -> CertifyReport:
    model = linearized_model(scenario.rigid_reference(), scenario.inertia())
    if completeness is Completeness.controllability:
        model = model.with_input(lambda t: np.eye(6), 6)

    sigma = model.period or 2 * math.pi
    settings = scenario.certify
    result = check_uniform_complete(
        model,
        completeness,
        sigma,
        period_grid(sigma, settings.grid_points),
        scenario.simulation.h,
        threshold=settings.min_eigenvalue,
    )

    return (
        CertifyReport(which)
        .with_entry("sigma", result.sigma)
        .and_entry("grid_points", settings.grid_points)
        .and_entry("alpha1", result.alpha1)
        .and_entry("alpha2", result.alpha2)
        .and_entry("threshold", result.threshold)
        .and_entry("grid_limited", result.grid_limited)
        .and_entry("second_pair_implied", result.second_pair_implied)
        .concluded(result.passed)
    )


def certify_decay(scenario: Scenario) -> CertifyReport:
    settings = scenario.certify
    k_e = scenario.plant.k_e
    system = embedded_system(scenario.inertia(), k_e)
    rng = np.random.default_rng(settings.seed)
    samples = sublevel_samples(rng, settings.samples, settings.sublevel_r, k_e)
    b = estimate_decay_constant(system, settings.sublevel_r, samples)

    flow = extended_field(system).driven_by(lambda t, x: np.zeros(3))
    worst = 0.0
    violations = 0
    for _ in range(DECAY_TRAJECTORIES):
        start = np.concatenate(
            [(CONFORMAL_SCALE * random_rotation(rng)).ravel(), np.zeros(3)]
        )
        trace = integrate(
            flow, 0.0, start, settings.decay_horizon, scenario.simulation.h
        )
        result = verify_exponential_decay(
            trace, system.constraint, b, settings.decay_slack
        )
        worst = max(worst, result.worst_ratio)
        violations += result.violations

    return (
        CertifyReport(Certificate.decay)
        .with_entry("b", b)
        .and_entry("samples", len(samples))
        .and_entry("sublevel_r", settings.sublevel_r)
        .and_entry("trajectories", DECAY_TRAJECTORIES)
        .and_entry("slack", settings.decay_slack)
        .and_entry("worst_ratio", worst)
        .and_entry("violations", violations)
        .concluded(b > 0.0 and violations == 0)
    )


def certify_gradient(scenario: Scenario) -> CertifyReport:
    settings = scenario.certify
    system = embedded_system(scenario.inertia(), scenario.plant.k_e)
    rng = np.random.default_rng(settings.seed)
    result = gradient_check(
        system, gl_plus_samples(rng, CHECK_POINTS), settings.fd_step
    )

    return (
        CertifyReport(Certificate.gradient)
        .with_entry("points", CHECK_POINTS)
        .and_entry("fd_step", settings.fd_step)
        .and_entry("max_relative_error", result.max_relative_error)
        .and_entry("tolerance", result.tolerance)
        .concluded(result.passed)
    )


def certify_tangency(scenario: Scenario) -> CertifyReport:
    settings = scenario.certify
    system = embedded_system(scenario.inertia(), scenario.plant.k_e)
    rng = np.random.default_rng(settings.seed)
    result = check_tangency(
        system, tangency_samples(rng, CHECK_POINTS), settings.tangency_tol
    )

    return (
        CertifyReport(Certificate.tangency)
        .with_entry("points", CHECK_POINTS)
        .and_entry("max_residual", result.max_residual)
        .and_entry("tolerance", result.tolerance)
        .concluded(result.passed)
    )
