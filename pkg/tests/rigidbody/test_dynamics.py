import numpy as np
import pytest

from embedkit.error import DomainWarning
from embedkit.linalg import frob_norm, orthogonality_drift
from embedkit.ode import FlowField, integrate
from embedkit.rigidbody import (
    Inertia,
    RigidBodyState,
    dynamics,
    extended_dynamics,
    grad_v,
    v_tilde,
)
from embedkit.testing import FakeGeometry

INERTIA = Inertia.diagonal(3.0, 2.0, 1.0)


def _free_flow(k_e: float = 1.0) -> FlowField:
    def rhs(t: float, x: np.ndarray) -> np.ndarray:
        state = RigidBodyState.from_vector(x)
        return extended_dynamics(state, np.zeros(3), INERTIA, k_e).as_vector()

    return FlowField(12, rhs)


def test_should_rest_at_equilibrium() -> None:
    r = FakeGeometry().rotation()

    ds = dynamics(RigidBodyState(r, np.zeros(3)), np.zeros(3), INERTIA)

    assert np.array_equal(ds.r, np.zeros((3, 3)))
    assert np.array_equal(ds.omega, np.zeros(3))


def test_should_keep_principal_spin() -> None:
    omega = np.array([0.0, 0.0, 2.5])

    ds = dynamics(RigidBodyState(np.eye(3), omega), np.zeros(3), INERTIA)

    assert np.allclose(ds.omega, np.zeros(3))


def test_should_conserve_kinetic_energy_without_torque() -> None:
    fake = FakeGeometry()
    s = RigidBodyState(fake.rotation(), fake.vector())

    ds = dynamics(s, np.zeros(3), INERTIA)

    assert abs(float(s.omega @ INERTIA.matrix @ ds.omega)) < 1e-12


def test_should_round_trip_state_vector() -> None:
    x = FakeGeometry().vector(12)

    assert np.array_equal(RigidBodyState.from_vector(x).as_vector(), x)


def test_should_pull_scaled_identity_back() -> None:
    s = RigidBodyState(2.0 * np.eye(3), np.zeros(3))

    ds = extended_dynamics(s, np.zeros(3), INERTIA, 1.0)

    assert v_tilde(s.r, 1.0) == pytest.approx(27 / 4)
    assert np.allclose(grad_v(s.r, 1.0), 6.0 * np.eye(3))
    assert np.allclose(ds.r, -6.0 * np.eye(3))


def test_should_vanish_on_rotations() -> None:
    r = FakeGeometry().rotation()

    assert v_tilde(r, 1.0) < 1e-28
    assert frob_norm(grad_v(r, 1.0)) < 1e-14


def test_should_warn_outside_gl_plus() -> None:
    s = RigidBodyState(-np.eye(3), np.zeros(3))

    with pytest.warns(DomainWarning):
        extended_dynamics(s, np.zeros(3), INERTIA, 1.0)


def test_should_stay_on_rotations() -> None:
    fake = FakeGeometry()
    start = RigidBodyState(fake.rotation(), np.array([1.0, 1.0, 1.0]))

    trace = integrate(_free_flow(), 0.0, start.as_vector(), 20.0, 1e-3)

    drift = max(orthogonality_drift(x[:9].reshape(3, 3)) for x in trace.states)
    assert drift <= 1e-6


def test_should_contract_orthogonality_defect() -> None:
    fake = FakeGeometry()
    start = RigidBodyState(1.01 * fake.rotation(), fake.vector())

    trace = integrate(_free_flow(), 0.0, start.as_vector(), 5.0, 1e-2)

    first = orthogonality_drift(trace.initial[:9].reshape(3, 3))
    last = orthogonality_drift(trace.final[:9].reshape(3, 3))
    assert last / first == pytest.approx(np.exp(-10.0), rel=0.05)
