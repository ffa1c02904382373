from dataclasses import replace

import numpy as np
import pytest

from embedkit.error import ConfigError
from embedkit.linalg import frob_norm, orthogonality_drift
from embedkit.sim import MatrixSpec, Scenario
from embedkit.testing import FakeScenario


def test_should_describe_reference_experiment() -> None:
    scenario = Scenario.paper()

    assert scenario.validate() is scenario
    assert np.array_equal(scenario.inertia().matrix, np.diag([3.0, 2.0, 1.0]))
    assert scenario.gains().k_p == 4.0
    assert np.array_equal(scenario.gains().k_d, 4.0 * np.eye(3))
    assert frob_norm(scenario.initial_attitude() - np.eye(3)) == pytest.approx(
        2.7936, abs=1e-4
    )
    assert np.array_equal(scenario.initial_state().omega, [1.0, 1.0, 1.0])


def test_should_normalize_initial_axis() -> None:
    scenario = Scenario.paper().with_initial(
        axis=np.array([0.0, 3.0, 0.0]), angle_deg=90.0
    )

    r = scenario.initial_attitude()

    assert orthogonality_drift(r) < 1e-12
    assert np.allclose(r @ np.array([0.0, 1.0, 0.0]), [0.0, 1.0, 0.0])


def test_should_prefer_explicit_initial_matrix() -> None:
    matrix = np.diag([1.0, -1.0, -1.0])

    scenario = Scenario.paper().with_initial(matrix=matrix)

    assert np.array_equal(scenario.initial_attitude(), matrix)


def test_should_drop_matrix_when_axis_is_given() -> None:
    scenario = (
        Scenario.paper()
        .with_initial(matrix=np.eye(3))
        .with_initial(axis=np.array([1.0, 0.0, 0.0]))
    )

    assert scenario.initial.matrix is None


def test_should_resolve_matrix_specs() -> None:
    assert np.array_equal(MatrixSpec.scalar(2.0).resolve(3), 2.0 * np.eye(3))
    assert np.array_equal(MatrixSpec(diag=[1.0, 2.0]).resolve(2), np.diag([1.0, 2.0]))
    assert np.array_equal(
        MatrixSpec(matrix=[[2.0, 1.0], [1.0, 2.0]]).resolve(2),
        np.array([[2.0, 1.0], [1.0, 2.0]]),
    )


def test_should_require_single_matrix_form() -> None:
    spec = MatrixSpec(scalar_times_identity=1.0, diag=[1.0, 1.0, 1.0])

    issues = list(spec.issues("observer.q", 3))

    assert len(issues) == 1
    assert issues[0][0] == "observer.q"


def test_should_report_every_issue() -> None:
    scenario = replace(
        Scenario.paper().with_observer("luenberger").and_span(1.0, 0.5, -0.1),
        plant=replace(Scenario.paper().plant, k_e=0.0),
    )

    with pytest.raises(ConfigError) as error:
        scenario.validate()

    paths = [path for path, _ in error.value.issues]
    assert paths == ["plant.k_e", "observer.kind", "simulation.h", "simulation.tf"]


def test_should_reject_indefinite_weight() -> None:
    singular = MatrixSpec(diag=[1.0, 0.0, 1.0])
    scenario = Scenario.paper().with_observer("kalman", r=singular)

    with pytest.raises(ConfigError) as error:
        scenario.validate()

    assert error.value.issues == [("observer.r", "not symmetric positive definite")]


def test_should_reject_short_initial_omega() -> None:
    scenario = replace(
        Scenario.paper(), initial=replace(Scenario.paper().initial, omega=[1.0])
    )

    assert list(scenario.issues()) == [("initial.omega", "expected 3 entries")]


def test_should_build_constant_reference() -> None:
    scenario = Scenario.paper().with_reference("constant", np.array([0.0, 0.0, 1.0]))

    reference = scenario.rigid_reference()

    assert reference.period is None
    assert np.array_equal(reference.omega0(3.0), [0.0, 0.0, 1.0])


def test_should_switch_off_domain_abort() -> None:
    scenario = Scenario.paper().and_abort_on_domain_exit(False)

    assert not scenario.simulation.abort_on_domain_exit


def test_should_load_fake_scenario() -> None:
    fake = FakeScenario()

    scenario = fake.entity()

    assert scenario.simulation.tf == 1.0
    assert 0.5 <= scenario.plant.k_e <= 2.0
    assert fake.raw()["controller"]["k_p"] == scenario.controller.k_p
