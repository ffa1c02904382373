import math

import numpy as np
import pytest

from embedkit.linalg import frob_norm, hat, rodrigues_exp, skew_vee, sym
from embedkit.ode import FlowField, integrate
from embedkit.rigidbody import (
    OUTPUT_MATRIX,
    Inertia,
    RigidBodyState,
    error_coords,
    extended_dynamics,
    input_matrix,
    linearized_a,
    linearized_model,
    measured_outputs,
    paper_reference,
    symmetric_error_rate,
)
from embedkit.testing import FakeGeometry

INERTIA = Inertia.diagonal(3.0, 2.0, 1.0)


def test_should_vanish_on_reference() -> None:
    reference = paper_reference(INERTIA)
    t = FakeGeometry().number(0.0, 6.0)
    s = RigidBodyState(reference.r0(t), reference.omega0(t))

    ec = error_coords(s, reference, t)

    assert frob_norm(ec.z_s) < 1e-15
    assert np.linalg.norm(ec.reduced()) < 1e-15


def test_should_read_small_rotation_as_skew_error() -> None:
    reference = paper_reference(INERTIA)
    axis = FakeGeometry().unit_axis()
    theta = 1e-3
    t = 0.7
    r = reference.r0(t) @ rodrigues_exp(axis, theta)
    s = RigidBodyState(r, reference.omega0(t))

    ec = error_coords(s, reference, t)

    assert np.allclose(ec.z_k_vee, math.sin(theta) * axis, atol=1e-12)
    assert frob_norm(ec.z_s) == pytest.approx(
        (1 - math.cos(theta)) * math.sqrt(2.0), rel=1e-6
    )
    assert np.array_equal(ec.d_omega, np.zeros(3))


def test_should_measure_initial_attitude_error() -> None:
    r = rodrigues_exp(np.array([0.0, 1.0, 0.0]), math.radians(162.0))

    error = frob_norm(r - paper_reference(INERTIA).r0(0.0))

    assert error == pytest.approx(2.7936, abs=1e-4)


def test_should_split_measurement_into_parts() -> None:
    reference = paper_reference(INERTIA)
    y = FakeGeometry().gl_plus()

    z_s, z_k_vee = measured_outputs(y, reference, 1.0)

    z = reference.r0(1.0).T @ (y - reference.r0(1.0))
    assert np.allclose(z_s + hat(z_k_vee), z)


def test_should_linearize_at_rest() -> None:
    a = linearized_a(np.zeros(3), INERTIA)

    expected = np.block([[np.zeros((3, 3)), np.eye(3)], [np.zeros((3, 6))]])
    assert np.array_equal(a, expected)


def test_should_drive_rate_through_inverse_inertia() -> None:
    b = input_matrix(INERTIA)

    assert np.array_equal(b[:3], np.zeros((3, 3)))
    assert np.allclose(b[3:], np.diag([1 / 3, 1 / 2, 1.0]))
    assert np.array_equal(OUTPUT_MATRIX @ np.arange(6.0), [0.0, 1.0, 2.0])


def test_should_repeat_linearization_each_period() -> None:
    model = linearized_model(paper_reference(INERTIA), INERTIA)

    assert np.allclose(model.a(0.4), model.a(0.4 + 2 * math.pi))
    assert model.period == pytest.approx(2 * math.pi)
    assert model.a_bound is not None and model.a_bound > 1.0


def test_should_match_linearized_attitude_error_rate() -> None:
    reference = paper_reference(INERTIA)
    fake = FakeGeometry()
    t = 1.3
    step = 1e-6
    z = 1e-4 * fake.vector(6)
    omega = reference.omega0(t) + z[3:]
    speed = float(np.linalg.norm(omega))
    r = reference.r0(t) @ (np.eye(3) + hat(z[:3]))

    def attitude_error(tau: float) -> np.ndarray:
        moved = r @ rodrigues_exp(omega / speed, speed * (tau - t))
        return skew_vee(reference.r0(tau).T @ moved)

    rate = (attitude_error(t + step) - attitude_error(t - step)) / (2 * step)

    predicted = linearized_a(reference.omega0(t), INERTIA)[:3] @ z
    assert np.allclose(rate, predicted, atol=1e-7)


def test_should_decay_symmetric_error_norm_at_twice_k_e() -> None:
    reference = paper_reference(INERTIA)
    k_e = 1.5
    z0 = FakeGeometry().symmetric()

    def rate(t: float, x: np.ndarray) -> np.ndarray:
        z_s = x.reshape(3, 3)
        return symmetric_error_rate(z_s, reference.omega0(t), k_e).ravel()

    period = 2 * math.pi

    trace = integrate(FlowField(9, rate), 0.0, z0.ravel(), period, period / 6000)

    expected = frob_norm(z0) * np.exp(-2.0 * k_e * trace.times)
    norms = np.linalg.norm(trace.states, axis=1)
    assert np.max(np.abs(norms / expected - 1.0)) < 1e-8
    z = trace.states.reshape(-1, 3, 3)
    assert np.allclose(z, z.transpose(0, 2, 1), atol=1e-14)


def test_should_match_extended_symmetric_error_rate() -> None:
    reference = paper_reference(INERTIA)
    k_e = 1.0
    t = 0.7
    sample = reference.at(t)
    z_s = 1e-4 * FakeGeometry().symmetric()
    s = RigidBodyState(sample.r0 @ (np.eye(3) + z_s), sample.omega0)

    r_dot = extended_dynamics(s, np.zeros(3), INERTIA, k_e).r
    r0_dot = sample.r0 @ hat(sample.omega0)
    exact = sym(sample.r0.T @ r_dot + r0_dot.T @ s.r)

    predicted = symmetric_error_rate(z_s, sample.omega0, k_e)
    assert np.allclose(exact, predicted, atol=1e-6)
