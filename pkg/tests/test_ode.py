import math

import numpy as np
import pytest

from embedkit.error import NonFiniteState
from embedkit.ode import FlowField, integrate, propagate, rk4_step, steps


def _exponential(rate: float = 1.0) -> FlowField:
    return FlowField(1, lambda t, x: rate * x)


def _oscillator() -> FlowField:
    return FlowField(2, lambda t, x: np.array([x[1], -x[0]]))


def test_should_keep_state_under_zero_field() -> None:
    x = np.array([1.0, -2.0])

    still = FlowField(2, lambda t, x: np.zeros(2))

    assert np.array_equal(rk4_step(still, 0.0, x, 0.1), x)


def test_should_step_exponential() -> None:
    x = rk4_step(_exponential(), 0.0, np.array([1.0]), 0.1)

    assert x[0] == pytest.approx(1.1051708333333333, abs=1e-15)
    assert abs(x[0] - math.exp(0.1)) < 1e-7


def test_should_not_step_backwards() -> None:
    with pytest.raises(ValueError):
        rk4_step(_exponential(), 0.0, np.array([1.0]), -0.1)


def test_should_integrate_decay() -> None:
    trace = integrate(_exponential(-1.0), 0.0, np.array([1.0]), 1.0, 0.01)

    assert len(trace) == 101
    assert abs(trace.final[0] - math.exp(-1.0)) < 1e-9


def test_should_show_fourth_order_convergence() -> None:
    coarse = integrate(_exponential(), 0.0, np.array([1.0]), 1.0, 0.1).final[0]
    fine = integrate(_exponential(), 0.0, np.array([1.0]), 1.0, 0.05).final[0]

    factor = abs(coarse - math.e) / abs(fine - math.e)

    assert 12.0 <= factor <= 20.0


def test_should_close_oscillator_orbit() -> None:
    h = 2 * math.pi / 6000
    trace = integrate(_oscillator(), 0.0, np.array([1.0, 0.0]), 2 * math.pi, h)

    assert len(trace) == 6001
    assert np.allclose(trace.final, [1.0, 0.0], atol=1e-8)


def test_should_keep_uniform_grid() -> None:
    trace = integrate(_oscillator(), 0.0, np.array([1.0, 0.0]), 5.0, 1e-3)

    assert float(np.max(np.abs(np.diff(trace.times) - 1e-3))) <= 1e-12 * 5.0


def test_should_be_deterministic() -> None:
    first = integrate(_oscillator(), 0.0, np.array([1.0, 0.0]), 3.0, 1e-2)
    second = integrate(_oscillator(), 0.0, np.array([1.0, 0.0]), 3.0, 1e-2)

    assert np.array_equal(first.states, second.states)


def test_should_yield_initial_sample_first() -> None:
    t, x = next(steps(_oscillator(), 0.5, np.array([1.0, 0.0]), 1.0, 0.1))

    assert t == 0.5
    assert np.array_equal(x, [1.0, 0.0])


def test_should_subdivide_stiff_steps() -> None:
    stiff = FlowField(1, lambda t, x: -1000.0 * x)

    trace = integrate(
        stiff, 0.0, np.array([1.0]), 0.1, 0.01, stiffness=lambda t, x: 1000.0
    )

    assert len(trace) == 11
    assert trace.final[0] == pytest.approx(math.exp(-100.0), abs=1e-12)


def test_should_report_divergence_time() -> None:
    blow_up = FlowField(1, lambda t, x: x * x)

    with pytest.raises(NonFiniteState) as error:
        integrate(blow_up, 0.0, np.array([1.0]), 2.0, 1e-3)

    assert error.value.time <= 1.01


def test_should_not_start_from_non_finite_state() -> None:
    with pytest.raises(NonFiniteState):
        integrate(_exponential(), 0.0, np.array([math.nan]), 1.0, 0.1)


def test_should_propagate_both_directions() -> None:
    x1 = propagate(_exponential(), 0.0, np.array([1.0]), 1.0, 1e-3)
    back = propagate(_exponential(), 1.0, x1, 0.0, 1e-3)

    assert x1[0] == pytest.approx(math.e, abs=1e-10)
    assert back[0] == pytest.approx(1.0, abs=1e-10)
