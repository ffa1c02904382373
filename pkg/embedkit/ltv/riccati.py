from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from embedkit.error import LostPositivity, NotPositiveDefinite, SingularWeight
from embedkit.linalg import Matrix, is_spd, sym, sym_eig_bounds
from embedkit.ltv.model import LtvModel
from embedkit.ode import FlowField, rk4_step, step_count, subdivisions

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12

WeightFn = Callable[[float], Matrix]


@dataclass(frozen=True, eq=False)
class RiccatiSchedule:
    times: np.ndarray
    p: np.ndarray
    gains: np.ndarray
    q: WeightFn
    r: WeightFn

    def __len__(self) -> int:
        return len(self.times)

    def gain_at(self, index: int) -> Matrix:
        return np.asarray(self.gains[index])


def riccati_rhs(p: Matrix, a: Matrix, c: Matrix, rw: Matrix, qw: Matrix) -> Matrix:
    _check_weight(rw)

    pct = p @ c.T
    dp = p @ a.T + a @ p - pct @ np.linalg.solve(rw, pct.T) + qw

    return sym(dp)


def riccati_rate(
    p: Matrix, a: Matrix, c: Matrix, r_inverse: Matrix, qw: Matrix
) -> Matrix:
    """riccati_rhs for a weight inverted once up front with weight_inverse."""
    pct = p @ c.T

    return sym(p @ a.T + a @ p - pct @ r_inverse @ pct.T + qw)


def weight_inverse(rw: Matrix) -> Matrix:
    _check_weight(rw)

    return np.asarray(np.linalg.inv(rw))


def _check_weight(rw: Matrix) -> None:
    condition = float(np.linalg.cond(rw))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise SingularWeight(condition)


def kalman_gain(p: Matrix, c: Matrix, rw: Matrix) -> Matrix:
    """L = P C^T R^{-1}."""
    return np.linalg.solve(rw, c @ p).T


def riccati_stiffness(p: Matrix, a: Matrix, c: Matrix, rw: Matrix) -> float:
    """Upper bound on the fastest rate of the linearized flow, 2(|A| + |L C|)."""
    return gain_stiffness(a, kalman_gain(p, c, rw), c)


def gain_stiffness(a: Matrix, gain: Matrix, c: Matrix) -> float:
    return 2.0 * (float(np.linalg.norm(a, 2)) + float(np.linalg.norm(gain @ c, 2)))


def integrate_riccati(
    m: LtvModel,
    p0: Matrix,
    qw: WeightFn,
    rw: WeightFn,
    t0: float,
    tf: float,
    h: float,
) -> RiccatiSchedule:
    if not is_spd(p0):
        raise NotPositiveDefinite("P(0)", sym_eig_bounds(sym(p0))[0])

    n = m.state_dim
    field = FlowField(
        n * n,
        lambda t, x: riccati_rhs(
            x.reshape(n, n), m.a(t), m.c(t), rw(t), qw(t)
        ).ravel(),
    )

    count = step_count(t0, tf, h)
    times = t0 + h * np.arange(count + 1)
    ps = [sym(np.array(p0, dtype=float))]
    for i in range(count):
        t = float(times[i])
        p = ps[-1]
        parts = subdivisions(h, riccati_stiffness(p, m.a(t), m.c(t), rw(t)))
        sub = h / parts
        x = p.ravel()
        for j in range(parts):
            x = rk4_step(field, t + j * sub, x, sub)
        p = sym(x.reshape(n, n))
        low = sym_eig_bounds(p)[0]
        if low <= 0.0:
            raise LostPositivity(float(times[i + 1]), low)
        ps.append(p)

    gains = [kalman_gain(p, m.c(float(t)), rw(float(t))) for t, p in zip(times, ps)]
    logger.info("riccati schedule over [%.4g, %.4g] with %d samples", t0, tf, len(ps))

    return RiccatiSchedule(times, np.array(ps), np.array(gains), qw, rw)
