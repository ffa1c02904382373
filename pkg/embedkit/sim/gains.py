from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from embedkit.error import ConfigError
from embedkit.ltv import integrate_riccati
from embedkit.ode import step_count
from embedkit.rigidbody import linearized_model, nonkalman_gain
from embedkit.sim.record import format_float
from embedkit.sim.scenario import Scenario

logger = logging.getLogger(__name__)

HEADER = ["t"] + [f"l{i}{j}" for i in range(1, 7) for j in range(1, 4)]


@dataclass(frozen=True, eq=False)
class GainSchedule:
    kind: str
    times: np.ndarray
    gains: np.ndarray

    def __len__(self) -> int:
        return len(self.times)

    def write_csv(self, path: Path) -> None:
        with path.open("w", newline="", encoding="utf-8") as stream:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(HEADER)
            for t, gain in zip(self.times, self.gains):
                writer.writerow(
                    [format_float(float(t))]
                    + [format_float(float(v)) for v in gain.ravel()]
                )


def gain_schedule(scenario: Scenario) -> GainSchedule:
    """L(t) on the simulation grid; the state observer shares the Kalman gain."""
    observer = scenario.observer
    simulation = scenario.simulation
    reference = scenario.rigid_reference()
    inertia = scenario.inertia()

    if observer.kind == "none":
        raise ConfigError("no gain schedule").with_issue(
            "observer.kind", "the full-state loop has no observer gain"
        )

    if observer.kind == "nonkalman":
        count = step_count(simulation.t0, simulation.tf, simulation.h)
        times = simulation.t0 + simulation.h * np.arange(count + 1)
        m1 = observer.m1.resolve(3)
        m2 = observer.m2.resolve(3)
        gains = np.array(
            [nonkalman_gain(reference, float(t), inertia, m1, m2) for t in times]
        )
        return GainSchedule(observer.kind, times, gains)

    q = observer.q.resolve(6)
    r = observer.r.resolve(3)
    schedule = integrate_riccati(
        linearized_model(reference, inertia),
        observer.p0.resolve(6),
        lambda t: q,
        lambda t: r,
        simulation.t0,
        simulation.tf,
        simulation.h,
    )
    logger.info("kalman gain schedule with %d samples", len(schedule))

    return GainSchedule(observer.kind, schedule.times, schedule.gains)
