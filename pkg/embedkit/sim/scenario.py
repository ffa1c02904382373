from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Any, Iterator

import numpy as np

from embedkit.error import ConfigError
from embedkit.linalg import Mat3, Matrix, Vec3, is_spd, rodrigues_exp
from embedkit.rigidbody import (
    ControllerGains,
    Inertia,
    RigidBodyState,
    RigidReference,
    constant_reference,
    paper_reference,
)

OBSERVER_KINDS = ("kalman", "nonkalman", "state", "none")
REFERENCE_KINDS = ("paper", "constant")


@dataclass(frozen=True)
class MatrixSpec:
    scalar_times_identity: float | None = None
    diag: list[float] | None = None
    matrix: list[list[float]] | None = None

    @classmethod
    def scalar(cls, value: float) -> MatrixSpec:
        return cls(scalar_times_identity=value)

    def keys(self) -> list[str]:
        return [f.name for f in fields(self) if getattr(self, f.name) is not None]

    def resolve(self, n: int) -> Matrix:
        if self.scalar_times_identity is not None:
            return self.scalar_times_identity * np.eye(n)
        if self.diag is not None:
            return np.diag(np.array(self.diag, dtype=float))

        return np.array(self.matrix, dtype=float)

    def issues(self, path: str, n: int) -> Iterator[tuple[str, str]]:
        keys = self.keys()
        if len(keys) != 1:
            yield path, f"expected exactly one of {_spec_keys()}, got {keys}"
            return
        if self.diag is not None and len(self.diag) != n:
            yield f"{path}.diag", f"expected {n} entries, got {len(self.diag)}"
            return
        if self.matrix is not None and not _is_square(self.matrix, n):
            yield f"{path}.matrix", f"expected a {n}x{n} matrix"
            return
        if not is_spd(self.resolve(n)):
            yield path, "not symmetric positive definite"


@dataclass(frozen=True)
class PlantSection:
    inertia_diag: list[float] = field(default_factory=lambda: [3.0, 2.0, 1.0])
    k_e: float = 1.0


@dataclass(frozen=True)
class ControllerSection:
    k_p: float = 4.0
    k_d: MatrixSpec = field(default_factory=lambda: MatrixSpec.scalar(4.0))


@dataclass(frozen=True)
class ReferenceSection:
    kind: str = "paper"
    omega: list[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])


@dataclass(frozen=True)
class InitialSection:
    axis: list[float] = field(default_factory=lambda: [0.0, 1.0, 0.0])
    angle_deg: float = 162.0
    matrix: list[list[float]] | None = None
    omega: list[float] = field(default_factory=lambda: [1.0, 1.0, 1.0])


@dataclass(frozen=True)
class ObserverSection:
    kind: str = "kalman"
    z0: list[float] = field(default_factory=lambda: [0.0, 0.0, 0.0, 1.0, 2.0, 1.0])
    q: MatrixSpec = field(default_factory=lambda: MatrixSpec.scalar(100.0))
    r: MatrixSpec = field(default_factory=lambda: MatrixSpec.scalar(0.01))
    p0: MatrixSpec = field(default_factory=lambda: MatrixSpec.scalar(100.0))
    m1: MatrixSpec = field(default_factory=lambda: MatrixSpec.scalar(1.0))
    m2: MatrixSpec = field(default_factory=lambda: MatrixSpec.scalar(1.0))


@dataclass(frozen=True)
class SimulationSection:
    t0: float = 0.0
    tf: float = 20.0
    h: float = 0.001
    abort_on_domain_exit: bool = True


@dataclass(frozen=True)
class CertifySection:
    seed: int = 7
    samples: int = 1000
    sublevel_r: float = 0.01
    grid_points: int = 8
    min_eigenvalue: float = 0.001
    fd_step: float = 1e-06
    tangency_tol: float = 1e-10
    decay_slack: float = 0.05
    decay_horizon: float = 3.0


@dataclass(frozen=True)
class Scenario:
    plant: PlantSection = field(default_factory=PlantSection)
    controller: ControllerSection = field(default_factory=ControllerSection)
    reference: ReferenceSection = field(default_factory=ReferenceSection)
    initial: InitialSection = field(default_factory=InitialSection)
    observer: ObserverSection = field(default_factory=ObserverSection)
    simulation: SimulationSection = field(default_factory=SimulationSection)
    certify: CertifySection = field(default_factory=CertifySection)

    @classmethod
    def paper(cls) -> Scenario:
        return cls()

    def with_observer(self, kind: str, **changes: Any) -> Scenario:
        return replace(self, observer=replace(self.observer, kind=kind, **changes))

    def with_initial(
        self,
        *,
        matrix: Mat3 | None = None,
        omega: Vec3 | None = None,
        axis: Vec3 | None = None,
        angle_deg: float | None = None,
    ) -> Scenario:
        initial = self.initial
        if matrix is not None:
            initial = replace(initial, matrix=np.asarray(matrix, dtype=float).tolist())
        if omega is not None:
            initial = replace(initial, omega=[float(w) for w in omega])
        if axis is not None:
            initial = replace(initial, axis=[float(a) for a in axis], matrix=None)
        if angle_deg is not None:
            initial = replace(initial, angle_deg=float(angle_deg), matrix=None)

        return replace(self, initial=initial)

    def with_reference(self, kind: str, omega: Vec3 | None = None) -> Scenario:
        section = ReferenceSection(kind=kind)
        if omega is not None:
            section = replace(section, omega=[float(w) for w in omega])

        return replace(self, reference=section)

    def and_span(self, t0: float, tf: float, h: float | None = None) -> Scenario:
        simulation = replace(self.simulation, t0=t0, tf=tf)
        if h is not None:
            simulation = replace(simulation, h=h)

        return replace(self, simulation=simulation)

    def and_abort_on_domain_exit(self, value: bool) -> Scenario:
        return replace(
            self, simulation=replace(self.simulation, abort_on_domain_exit=value)
        )

    def validate(self) -> Scenario:
        error = ConfigError("invalid scenario")
        for path, message in self.issues():
            error.with_issue(path, message)
        error.fire()

        return self

    def issues(self) -> Iterator[tuple[str, str]]:
        plant = self.plant
        if len(plant.inertia_diag) != 3:
            yield "plant.inertia_diag", "expected 3 entries"
        elif min(plant.inertia_diag) <= 0:
            yield "plant.inertia_diag", "entries must be positive"
        if plant.k_e <= 0:
            yield "plant.k_e", "must be positive"

        if self.controller.k_p <= 0:
            yield "controller.k_p", "must be positive"
        yield from self.controller.k_d.issues("controller.k_d", 3)

        if self.reference.kind not in REFERENCE_KINDS:
            yield "reference.kind", f"expected one of {list(REFERENCE_KINDS)}"
        if len(self.reference.omega) != 3:
            yield "reference.omega", "expected 3 entries"

        yield from self._initial_issues()
        yield from self._observer_issues()

        simulation = self.simulation
        if simulation.h <= 0:
            yield "simulation.h", "must be positive"
        if simulation.tf <= simulation.t0:
            yield "simulation.tf", "must exceed simulation.t0"

        certify = self.certify
        for name in ("samples", "grid_points", "sublevel_r", "fd_step"):
            if getattr(certify, name) <= 0:
                yield f"certify.{name}", "must be positive"
        if certify.decay_horizon <= 0:
            yield "certify.decay_horizon", "must be positive"

    def _initial_issues(self) -> Iterator[tuple[str, str]]:
        initial = self.initial
        if initial.matrix is not None:
            if not _is_square(initial.matrix, 3):
                yield "initial.matrix", "expected a 3x3 matrix"
        elif len(initial.axis) != 3:
            yield "initial.axis", "expected 3 entries"
        elif float(np.linalg.norm(initial.axis)) == 0.0:
            yield "initial.axis", "must be nonzero"
        if len(initial.omega) != 3:
            yield "initial.omega", "expected 3 entries"

    def _observer_issues(self) -> Iterator[tuple[str, str]]:
        observer = self.observer
        if observer.kind not in OBSERVER_KINDS:
            yield "observer.kind", f"expected one of {list(OBSERVER_KINDS)}"
        if len(observer.z0) != 6:
            yield "observer.z0", "expected 6 entries"
        yield from observer.q.issues("observer.q", 6)
        yield from observer.r.issues("observer.r", 3)
        yield from observer.p0.issues("observer.p0", 6)
        yield from observer.m1.issues("observer.m1", 3)
        yield from observer.m2.issues("observer.m2", 3)

    def inertia(self) -> Inertia:
        return Inertia.diagonal(*self.plant.inertia_diag)

    def gains(self) -> ControllerGains:
        return ControllerGains(
            self.controller.k_p, self.controller.k_d.resolve(3), self.plant.k_e
        )

    def rigid_reference(self) -> RigidReference:
        if self.reference.kind == "constant":
            return constant_reference(np.array(self.reference.omega), self.inertia())

        return paper_reference(self.inertia())

    def initial_attitude(self) -> Mat3:
        if self.initial.matrix is not None:
            return np.array(self.initial.matrix, dtype=float)

        axis = np.array(self.initial.axis, dtype=float)

        return rodrigues_exp(
            axis / np.linalg.norm(axis), math.radians(self.initial.angle_deg)
        )

    def initial_state(self) -> RigidBodyState:
        return RigidBodyState(
            self.initial_attitude(), np.array(self.initial.omega, dtype=float)
        )


def _spec_keys() -> list[str]:
    return [f.name for f in fields(MatrixSpec)]


def _is_square(rows: list[list[float]], n: int) -> bool:
    return len(rows) == n and all(len(row) == n for row in rows)
