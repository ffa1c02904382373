from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson

from embedkit.linalg import Matrix, sym, sym_eig_bounds
from embedkit.ode import FlowField, propagate

logger = logging.getLogger(__name__)

MatrixFn = Callable[[float], Matrix]


@dataclass(frozen=True)
class LtvModel:
    state_dim: int
    control_dim: int
    output_dim: int
    a: MatrixFn
    b: MatrixFn
    c: MatrixFn
    a_bound: float | None = None
    period: float | None = None

    def with_input(self, b: MatrixFn, control_dim: int) -> LtvModel:
        return replace(self, b=b, control_dim=control_dim)


class Completeness(Enum):
    controllability = "controllability"
    observability = "observability"


@dataclass(frozen=True)
class UniformCertificate:
    which: Completeness
    sigma: float
    alpha1: float
    alpha2: float
    threshold: float
    grid_limited: bool
    second_pair_implied: bool

    @property
    def passed(self) -> bool:
        return self.alpha1 > self.threshold


def transition_matrix(m: LtvModel, t: float, tau: float, h: float) -> Matrix:
    n = m.state_dim
    field = FlowField(n * n, lambda s, x: (m.a(s) @ x.reshape(n, n)).ravel())

    return propagate(field, tau, np.eye(n).ravel(), t, h).reshape(n, n)


def controllability_gramian(m: LtvModel, t: float, t_bar: float, h: float) -> Matrix:
    """W(t, t_bar) with Phi(t, tau) integrated in tau from Phi(t, t) = I."""
    n = m.state_dim
    field = FlowField(n * n, lambda s, x: -(x.reshape(n, n) @ m.a(s)).ravel())

    def integrand(tau: float, phi: Matrix) -> Matrix:
        weighted = phi @ m.b(tau)
        return weighted @ weighted.T

    return _gramian(field, n, t, t_bar, h, integrand)


def observability_gramian(m: LtvModel, t: float, t_bar: float, h: float) -> Matrix:
    """V(t, t_bar) with Phi(tau, t) integrated forward from Phi(t, t) = I."""
    n = m.state_dim
    field = FlowField(n * n, lambda s, x: (m.a(s) @ x.reshape(n, n)).ravel())

    def integrand(tau: float, phi: Matrix) -> Matrix:
        weighted = m.c(tau) @ phi
        return weighted.T @ weighted

    return _gramian(field, n, t, t_bar, h, integrand)


def check_uniform_complete(
    m: LtvModel,
    which: Completeness,
    sigma: float,
    t_grid: Sequence[float],
    h: float,
    *,
    threshold: float = 0.0,
) -> UniformCertificate:
    if sigma <= 0:
        raise ValueError(f"window length must be positive, got {sigma}")
    if not t_grid:
        raise ValueError("empty time grid")

    gramian = (
        controllability_gramian
        if which is Completeness.controllability
        else observability_gramian
    )
    lows: list[float] = []
    highs: list[float] = []
    for t in t_grid:
        low, high = sym_eig_bounds(gramian(m, t, t + sigma, h))
        logger.debug("%s gramian at t=%.4g: [%.4g, %.4g]", which.value, t, low, high)
        lows.append(low)
        highs.append(high)

    return UniformCertificate(
        which=which,
        sigma=sigma,
        alpha1=min(lows),
        alpha2=max(highs),
        threshold=threshold,
        grid_limited=m.period is None,
        second_pair_implied=m.a_bound is not None,
    )


def period_grid(period: float, points: int) -> list[float]:
    return [period * i / points for i in range(points)]


def _gramian(
    field: FlowField,
    n: int,
    t: float,
    t_bar: float,
    h: float,
    integrand: Callable[[float, Matrix], Matrix],
) -> Matrix:
    if t_bar <= t:
        raise ValueError(f"empty window [{t}, {t_bar}]")

    count = _even_count(t_bar - t, h)
    sub = (t_bar - t) / count
    taus = t + sub * np.arange(count + 1)
    phi = np.eye(n).ravel()
    values = [integrand(t, phi.reshape(n, n))]
    for i in range(count):
        phi = propagate(field, float(taus[i]), phi, float(taus[i + 1]), sub)
        values.append(integrand(float(taus[i + 1]), phi.reshape(n, n)))

    return sym(np.asarray(simpson(np.array(values), x=taus, axis=0)))


def _even_count(span: float, h: float) -> int:
    count = max(2, math.ceil(span / h - 1e-9))

    return count + count % 2
