from __future__ import annotations

import math

import numpy as np

from embedkit.linalg import Mat3, Vec3, Vector, frob_norm, rodrigues_exp, sym
from embedkit.rigidbody.dynamics import v_tilde


def random_axis(rng: np.random.Generator) -> Vec3:
    v = rng.standard_normal(3)

    return np.asarray(v / np.linalg.norm(v))


def random_rotation(rng: np.random.Generator) -> Mat3:
    return rodrigues_exp(random_axis(rng), float(rng.uniform(0.0, math.pi)))


def random_gl_plus(rng: np.random.Generator, scale: float = 1.0) -> Mat3:
    while True:
        candidate = scale * rng.standard_normal((3, 3))
        if np.linalg.det(candidate) > 0.0:
            return np.asarray(candidate)


def tangency_samples(
    rng: np.random.Generator, count: int
) -> list[tuple[Vector, Vector]]:
    samples = []
    for _ in range(count):
        r = random_gl_plus(rng)
        omega = rng.standard_normal(3)
        u = rng.standard_normal(3)
        samples.append((np.concatenate([r.ravel(), omega]), u))

    return samples


def gl_plus_samples(rng: np.random.Generator, count: int) -> list[Vector]:
    return [
        np.concatenate([random_gl_plus(rng).ravel(), rng.standard_normal(3)])
        for _ in range(count)
    ]


def sublevel_samples(
    rng: np.random.Generator,
    count: int,
    sublevel_r: float,
    k_e: float,
    *,
    smallest: float = 1e-5,
) -> list[Vector]:
    """Points R = Q (I + S) with S symmetric, spread log-uniformly in size so
    that both the neighbourhood of SO(3) and the edge of {V < r} are covered."""
    largest = math.sqrt(sublevel_r / k_e)
    samples: list[Vector] = []
    while len(samples) < count:
        direction = sym(rng.standard_normal((3, 3)))
        direction /= frob_norm(direction)
        size = math.exp(rng.uniform(math.log(smallest), math.log(largest)))
        r = random_rotation(rng) @ (np.eye(3) + size * direction)
        if 0.0 < v_tilde(r, k_e) < sublevel_r and np.linalg.det(r) > 0.0:
            samples.append(np.concatenate([r.ravel(), np.zeros(3)]))

    return samples


def conformal_samples(
    rng: np.random.Generator, count: int, epsilon: float
) -> list[Vector]:
    """(1 + epsilon) Q for random rotations Q, with zero body rate."""
    return [
        np.concatenate([((1.0 + epsilon) * random_rotation(rng)).ravel(), np.zeros(3)])
        for _ in range(count)
    ]


def max_attitude_error(rng: np.random.Generator, pairs: int) -> float:
    """Largest ||R1 - R2|| found over random rotation pairs; bounded by 2 sqrt 2."""
    largest = 0.0
    for _ in range(pairs):
        largest = max(largest, frob_norm(random_rotation(rng) - random_rotation(rng)))

    return largest
