from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import linregress

from embedkit.error import DegenerateTrace, DimensionMismatch
from embedkit.linalg import Matrix, Vector
from embedkit.ode import Trace

UNDERFLOW = 1e-15
NOISE_FLOOR = 1e-10
MIN_SAMPLES = 10


@dataclass(frozen=True)
class DecayFit:
    rate: float
    r2: float
    samples: int
    clamped: bool


def composite_matrix(
    a: Matrix, b: Matrix, k: Matrix, gain: Matrix, c: Matrix
) -> Matrix:
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatch((n, n), a.shape)
    if b.shape[0] != n or k.shape != (b.shape[1], n):
        raise DimensionMismatch((b.shape[1], n), k.shape)
    if c.shape[1] != n or gain.shape != (n, c.shape[0]):
        raise DimensionMismatch((n, c.shape[0]), gain.shape)

    bk = b @ k

    return np.block([[a - bk, bk], [np.zeros((n, n)), a - gain @ c]])


def decay_rate_fit(
    trace: Trace,
    norm_fn: Callable[[Vector], float],
    *,
    floor: float = NOISE_FLOOR,
) -> DecayFit:
    """Least-squares slope of log-norm over the final half of the trace
    prefix that stays above the noise floor."""
    if len(trace) < MIN_SAMPLES:
        raise DegenerateTrace(len(trace))

    return fit_decay(trace.times, trace.norms(norm_fn), floor=floor)


def fit_decay(times: Vector, norms: Vector, *, floor: float = NOISE_FLOOR) -> DecayFit:
    if len(times) < MIN_SAMPLES:
        raise DegenerateTrace(len(times))

    below = np.flatnonzero(norms < floor)
    end = int(below[0]) if below.size else len(norms)
    if end < MIN_SAMPLES:
        end = len(norms)

    start = end // 2
    window = np.asarray(norms[start:end], dtype=float)
    clamped = bool(np.any(window < UNDERFLOW))
    logs = np.log(np.maximum(window, UNDERFLOW))
    ts = np.asarray(times[start:end], dtype=float)

    if float(np.ptp(logs)) == 0.0:
        return DecayFit(0.0, 1.0, len(window), clamped)

    result = linregress(ts, logs)
    r2 = float(result.rvalue) ** 2

    if not math.isfinite(r2):
        r2 = 0.0

    return DecayFit(float(result.slope), r2, len(window), clamped)
