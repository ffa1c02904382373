from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Protocol

import numpy as np

from embedkit.error import DomainExit, LostPositivity, NonFiniteState
from embedkit.linalg import (
    Matrix,
    Vec3,
    Vector,
    frob_norm,
    hat,
    orthogonality_drift,
    sym,
    sym_eig_bounds,
)
from embedkit.ltv import LtvModel, gain_stiffness, riccati_rate, weight_inverse
from embedkit.ode import FlowField, steps
from embedkit.rigidbody import (
    OUTPUT_MATRIX,
    STATE_DIM,
    ControllerGains,
    Inertia,
    ReferenceSample,
    RigidBodyState,
    RigidReference,
    error_coords_at,
    extended_dynamics,
    linearized_model,
    measured_outputs_at,
    nonkalman_gain_at,
    nonlinear_state_observer_rhs_at,
    tracking_control,
    tracking_error_observer_rhs,
    v_tilde,
)
from embedkit.sim.record import RunRecord, RunRow
from embedkit.sim.scenario import Scenario

logger = logging.getLogger(__name__)


class Observer(Protocol):  # pragma: no cover
    kind: str

    @property
    def dimension(self) -> int:
        pass

    def initial(self, plant: RigidBodyState, sample: ReferenceSample) -> Vector:
        pass

    def estimate(
        self, plant: RigidBodyState, state: Vector, sample: ReferenceSample
    ) -> Vector:
        pass

    def rhs(
        self,
        t: float,
        plant: RigidBodyState,
        state: Vector,
        u: Vec3,
        sample: ReferenceSample,
    ) -> Vector:
        pass

    def stiffness(self, t: float, state: Vector, sample: ReferenceSample) -> float:
        pass

    def check(self, t: float, state: Vector) -> None:
        pass


@dataclass(frozen=True)
class NoObserver:
    kind: str = "none"

    @property
    def dimension(self) -> int:
        return 0

    def initial(self, plant: RigidBodyState, sample: ReferenceSample) -> Vector:
        return np.zeros(0)

    def estimate(
        self, plant: RigidBodyState, state: Vector, sample: ReferenceSample
    ) -> Vector:
        return error_coords_at(plant, sample).reduced()

    def rhs(
        self,
        t: float,
        plant: RigidBodyState,
        state: Vector,
        u: Vec3,
        sample: ReferenceSample,
    ) -> Vector:
        return np.zeros(0)

    def stiffness(self, t: float, state: Vector, sample: ReferenceSample) -> float:
        return 0.0

    def check(self, t: float, state: Vector) -> None:
        pass


@dataclass(frozen=True)
class RiccatiBlock:
    """The 6x6 Riccati matrix carried row-major after the observer's own state."""

    model: LtvModel
    q: Matrix
    r: Matrix
    p0: Matrix
    offset: int

    def p(self, state: Vector) -> Matrix:
        return state[self.offset :].reshape(6, 6)

    @cached_property
    def r_inverse(self) -> Matrix:
        return weight_inverse(self.r)

    def gain(self, state: Vector) -> Matrix:
        return self.p(state) @ OUTPUT_MATRIX.T @ self.r_inverse

    def rate(self, a: Matrix, state: Vector) -> Matrix:
        return riccati_rate(self.p(state), a, OUTPUT_MATRIX, self.r_inverse, self.q)

    def stiffness(self, a: Matrix, state: Vector) -> float:
        return gain_stiffness(a, self.gain(state), OUTPUT_MATRIX)

    def check(self, t: float, state: Vector) -> None:
        low = sym_eig_bounds(sym(self.p(state)))[0]
        if low <= 0.0:
            raise LostPositivity(t, low)


@dataclass(frozen=True)
class KalmanObserver:
    z0: Vector
    riccati: RiccatiBlock
    kind: str = "kalman"

    @property
    def dimension(self) -> int:
        return 6 + 36

    def initial(self, plant: RigidBodyState, sample: ReferenceSample) -> Vector:
        return np.concatenate([self.z0, self.riccati.p0.ravel()])

    def estimate(
        self, plant: RigidBodyState, state: Vector, sample: ReferenceSample
    ) -> Vector:
        return state[:6]

    def rhs(
        self,
        t: float,
        plant: RigidBodyState,
        state: Vector,
        u: Vec3,
        sample: ReferenceSample,
    ) -> Vector:
        model = self.riccati.model
        a = model.a(t)
        _, dy_k = measured_outputs_at(plant.r, sample)
        dz = tracking_error_observer_rhs(
            state[:6],
            u - sample.u0,
            dy_k,
            a,
            model.b(t),
            self.riccati.gain(state),
        )

        return np.concatenate([dz, self.riccati.rate(a, state).ravel()])

    def stiffness(self, t: float, state: Vector, sample: ReferenceSample) -> float:
        return self.riccati.stiffness(self.riccati.model.a(t), state)

    def check(self, t: float, state: Vector) -> None:
        self.riccati.check(t, state)


@dataclass(frozen=True)
class NonKalmanObserver:
    z0: Vector
    model: LtvModel
    inertia: Inertia
    m1: Matrix
    m2: Matrix
    kind: str = "nonkalman"

    @property
    def dimension(self) -> int:
        return 6

    def initial(self, plant: RigidBodyState, sample: ReferenceSample) -> Vector:
        return np.array(self.z0, dtype=float)

    def estimate(
        self, plant: RigidBodyState, state: Vector, sample: ReferenceSample
    ) -> Vector:
        return state

    def rhs(
        self,
        t: float,
        plant: RigidBodyState,
        state: Vector,
        u: Vec3,
        sample: ReferenceSample,
    ) -> Vector:
        _, dy_k = measured_outputs_at(plant.r, sample)

        return tracking_error_observer_rhs(
            state,
            u - sample.u0,
            dy_k,
            self.model.a(t),
            self.model.b(t),
            nonkalman_gain_at(sample, self.inertia, self.m1, self.m2),
        )

    def stiffness(self, t: float, state: Vector, sample: ReferenceSample) -> float:
        gain = nonkalman_gain_at(sample, self.inertia, self.m1, self.m2)

        return float(np.linalg.norm(self.model.a(t), 2) + np.linalg.norm(gain, 2))

    def check(self, t: float, state: Vector) -> None:
        pass


@dataclass(frozen=True)
class StateObserver:
    """Estimates (R, Omega) directly; the estimate starts at the reference
    state shifted by z0 in error coordinates."""

    z0: Vector
    riccati: RiccatiBlock
    inertia: Inertia
    k_e: float
    kind: str = "state"

    @property
    def dimension(self) -> int:
        return STATE_DIM + 36

    def initial(self, plant: RigidBodyState, sample: ReferenceSample) -> Vector:
        attitude = sample.r0 @ (np.eye(3) + hat(self.z0[:3]))
        estimate = RigidBodyState(attitude, sample.omega0 + self.z0[3:])

        return np.concatenate([estimate.as_vector(), self.riccati.p0.ravel()])

    def estimate(
        self, plant: RigidBodyState, state: Vector, sample: ReferenceSample
    ) -> Vector:
        return error_coords_at(
            RigidBodyState.from_vector(state[:STATE_DIM]), sample
        ).reduced()

    def rhs(
        self,
        t: float,
        plant: RigidBodyState,
        state: Vector,
        u: Vec3,
        sample: ReferenceSample,
    ) -> Vector:
        dx = nonlinear_state_observer_rhs_at(
            state[:STATE_DIM],
            u,
            plant.r,
            self.riccati.gain(state),
            sample,
            self.inertia,
            self.k_e,
        )

        a = self.riccati.model.a(t)

        return np.concatenate([dx, self.riccati.rate(a, state).ravel()])

    def stiffness(self, t: float, state: Vector, sample: ReferenceSample) -> float:
        return self.riccati.stiffness(self.riccati.model.a(t), state) + 2.0 * self.k_e

    def check(self, t: float, state: Vector) -> None:
        self.riccati.check(t, state)


@dataclass
class ClosedLoop:
    scenario: Scenario
    reference: RigidReference = field(init=False)
    inertia: Inertia = field(init=False)
    gains: ControllerGains = field(init=False)
    observer: Observer = field(init=False)

    def __post_init__(self) -> None:
        self.inertia = self.scenario.inertia()
        self.gains = self.scenario.gains()
        self.reference = self.scenario.rigid_reference()
        self.observer = observer_for(self.scenario, self.reference, self.inertia)

    @property
    def dimension(self) -> int:
        return STATE_DIM + self.observer.dimension

    def estimate(self, x: Vector, sample: ReferenceSample) -> Vector:
        plant = RigidBodyState.from_vector(x[:STATE_DIM])

        return self.observer.estimate(plant, x[STATE_DIM:], sample)

    def control(self, t: float, x: Vector, sample: ReferenceSample) -> Vec3:
        z = self.estimate(x, sample)

        return tracking_control(z[:3], z[3:], sample, self.inertia, self.gains)

    def flow(self) -> FlowField:
        k_e = self.scenario.plant.k_e

        def rhs(t: float, x: Vector) -> Vector:
            sample = self.reference.at(t)
            plant = RigidBodyState.from_vector(x[:STATE_DIM])
            u = self.control(t, x, sample)
            dplant = extended_dynamics(plant, u, self.inertia, k_e).as_vector()
            dobs = self.observer.rhs(t, plant, x[STATE_DIM:], u, sample)

            return np.concatenate([dplant, dobs])

        return FlowField(self.dimension, rhs)

    def stiffness(self, t: float, x: Vector) -> float:
        return self.observer.stiffness(t, x[STATE_DIM:], self.reference.at(t))

    def initial(self) -> Vector:
        t0 = self.scenario.simulation.t0
        plant = self.scenario.initial_state()
        sample = self.reference.at(t0)

        return np.concatenate(
            [plant.as_vector(), self.observer.initial(plant, sample)]
        )

    def row(self, t: float, x: Vector) -> RunRow:
        sample = self.reference.at(t)
        plant = RigidBodyState.from_vector(x[:STATE_DIM])
        ec = error_coords_at(plant, sample)
        u = self.control(t, x, sample)
        z = self.estimate(x, sample)
        eo = float(np.linalg.norm(ec.reduced() - z))

        return RunRow(
            t=t,
            dr_norm=frob_norm(plant.r - sample.r0),
            domega_norm=float(np.linalg.norm(plant.omega - sample.omega0)),
            eo_norm=eo,
            v_tilde=v_tilde(plant.r, self.scenario.plant.k_e),
            orth_drift=orthogonality_drift(plant.r),
            u=(float(u[0]), float(u[1]), float(u[2])),
            z_o=tuple(float(v) for v in z),  # type: ignore
        )

    def run(self) -> RunRecord:
        simulation = self.scenario.simulation
        record = RunRecord(self.observer.kind)
        logger.info(
            "running %s loop over [%.4g, %.4g] with h=%.3g",
            self.observer.kind,
            simulation.t0,
            simulation.tf,
            simulation.h,
        )

        try:
            for t, x in steps(
                self.flow(),
                simulation.t0,
                self.initial(),
                simulation.tf,
                simulation.h,
                stiffness=self.stiffness,
            ):
                self._guard(t, x)
                record.and_row(self.row(t, x))
        except (DomainExit, LostPositivity, NonFiniteState) as e:
            logger.warning("run aborted: %s", e)
            return record.aborted_with(f"{type(e).__name__}: {e}")

        logger.info("run finished with %d rows", len(record))

        return record

    def _guard(self, t: float, x: Vector) -> None:
        determinant = float(np.linalg.det(x[:9].reshape(3, 3)))
        if determinant <= 0.0 and self.scenario.simulation.abort_on_domain_exit:
            raise DomainExit(t, determinant)

        self.observer.check(t, x[STATE_DIM:])


def observer_for(
    scenario: Scenario, reference: RigidReference, inertia: Inertia
) -> Observer:
    section = scenario.observer
    z0 = np.array(section.z0, dtype=float)
    if section.kind == "none":
        return NoObserver()

    model = linearized_model(reference, inertia)
    if section.kind == "nonkalman":
        return NonKalmanObserver(
            z0, model, inertia, section.m1.resolve(3), section.m2.resolve(3)
        )

    riccati = RiccatiBlock(
        model=model,
        q=section.q.resolve(6),
        r=section.r.resolve(3),
        p0=section.p0.resolve(6),
        offset=6 if section.kind == "kalman" else STATE_DIM,
    )
    if section.kind == "state":
        return StateObserver(z0, riccati, inertia, scenario.plant.k_e)

    return KalmanObserver(z0, riccati)


def simulate(scenario: Scenario) -> RunRecord:
    return ClosedLoop(scenario.validate()).run()
