from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from embedkit.error import DimensionMismatch, NonFiniteState
from embedkit.linalg import Matrix, Vector

logger = logging.getLogger(__name__)

DIVERGENCE_NORM = 1e9

Rhs = Callable[[float, Vector], Vector]
Stiffness = Callable[[float, Vector], float]


@dataclass(frozen=True)
class FlowField:
    dimension: int
    rhs: Rhs

    def __call__(self, t: float, x: Vector) -> Vector:
        dx = self.rhs(t, x)
        if dx.shape != (self.dimension,):
            raise DimensionMismatch((self.dimension,), dx.shape)

        return dx


@dataclass(frozen=True, eq=False)
class Trace:
    times: Vector
    states: Matrix

    def __len__(self) -> int:
        return len(self.times)

    @property
    def initial(self) -> Vector:
        return self.states[0]

    @property
    def final(self) -> Vector:
        return self.states[-1]

    def norms(self, norm_fn: Callable[[Vector], float]) -> Vector:
        return np.array([norm_fn(state) for state in self.states])


def rk4_step(f: FlowField, t: float, x: Vector, h: float) -> Vector:
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")

    return _rk4(f, t, x, h)


def step_count(t0: float, tf: float, h: float) -> int:
    if tf <= t0:
        raise ValueError(f"empty time span [{t0}, {tf}]")
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")

    return int(math.floor((tf - t0) / h + 1e-9))


def subdivisions(h: float, rho: float) -> int:
    return max(1, math.ceil(h * rho))


def steps(
    f: FlowField,
    t0: float,
    x0: Vector,
    tf: float,
    h: float,
    *,
    stiffness: Stiffness | None = None,
) -> Iterator[tuple[float, Vector]]:
    """Yields (t, x) on the uniform grid t0 + i*h, starting with the initial
    sample. Each outer step is split into equal substeps when a stiffness
    estimate is supplied."""
    x = np.array(x0, dtype=float)
    _ensure_finite(t0, x)
    count = step_count(t0, tf, h)

    yield t0, x

    for i in range(count):
        t = t0 + i * h
        parts = 1 if stiffness is None else subdivisions(h, stiffness(t, x))
        if parts > 1:
            logger.debug("splitting step at t=%.6g into %d substeps", t, parts)
        sub = h / parts
        for j in range(parts):
            x = _rk4(f, t + j * sub, x, sub)

        t_next = t0 + (i + 1) * h
        _ensure_bounded(t_next, x)

        yield t_next, x


def integrate(
    f: FlowField,
    t0: float,
    x0: Vector,
    tf: float,
    h: float,
    *,
    stiffness: Stiffness | None = None,
) -> Trace:
    times: list[float] = []
    states: list[Vector] = []
    for t, x in steps(f, t0, x0, tf, h, stiffness=stiffness):
        times.append(t)
        states.append(x)

    return Trace(np.array(times), np.array(states))


def propagate(f: FlowField, t0: float, x0: Vector, t1: float, h: float) -> Vector:
    """Integrates from t0 to t1 in either direction with the step shrunk so
    that it divides the interval evenly."""
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")

    x = np.array(x0, dtype=float)
    count = math.ceil(abs(t1 - t0) / h - 1e-9)
    if count == 0:
        return x

    sub = (t1 - t0) / count
    for i in range(count):
        x = _rk4(f, t0 + i * sub, x, sub)
    _ensure_bounded(t1, x)

    return x


def _rk4(f: FlowField, t: float, x: Vector, h: float) -> Vector:
    k1 = _stage(f, t, x)
    k2 = _stage(f, t + 0.5 * h, x + 0.5 * h * k1)
    k3 = _stage(f, t + 0.5 * h, x + 0.5 * h * k2)
    k4 = _stage(f, t + h, x + h * k3)

    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _stage(f: FlowField, t: float, x: Vector) -> Vector:
    k = f(t, x)
    if not np.all(np.isfinite(k)):
        raise NonFiniteState(t, "non-finite derivative")

    return k


def _ensure_finite(t: float, x: Vector) -> None:
    if not np.all(np.isfinite(x)):
        raise NonFiniteState(t)


def _ensure_bounded(t: float, x: Vector) -> None:
    _ensure_finite(t, x)
    if float(np.linalg.norm(x)) > DIVERGENCE_NORM:
        raise NonFiniteState(t, "state norm exceeded divergence bound")
