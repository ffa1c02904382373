from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt

from embedkit.error import (
    DimensionMismatch,
    NonUnitAxis,
    NotSkewSymmetric,
    NotSymmetric,
)

Matrix = npt.NDArray[np.float64]
Vector = npt.NDArray[np.float64]

Mat3 = Matrix
Vec3 = Vector
MatN = Matrix

SKEW_TOLERANCE = 1e-9
SYMMETRY_TOLERANCE = 1e-8
AXIS_TOLERANCE = 1e-9


def hat(v: Vec3) -> Mat3:
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )


def vee(m: Mat3) -> Vec3:
    asymmetry = float(np.max(np.abs(m + m.T)))
    if asymmetry > SKEW_TOLERANCE:
        raise NotSkewSymmetric(asymmetry, SKEW_TOLERANCE)

    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def cross(a: Vec3, b: Vec3) -> Vec3:
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


def sym(a: Matrix) -> Matrix:
    return 0.5 * (a + a.T)


def skew(a: Matrix) -> Matrix:
    return 0.5 * (a - a.T)


def skew_vee(a: Mat3) -> Vec3:
    """vee(skew(a)) without the skew-symmetry check."""
    return 0.5 * np.array([a[2, 1] - a[1, 2], a[0, 2] - a[2, 0], a[1, 0] - a[0, 1]])


def frob_inner(a: Matrix, b: Matrix) -> float:
    if a.shape != b.shape:
        raise DimensionMismatch(a.shape, b.shape)

    return float(np.sum(a * b))


def frob_norm(a: Matrix) -> float:
    return math.sqrt(frob_inner(a, a))


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


def rodrigues_exp(axis: Vec3, angle: float) -> Mat3:
    norm = float(np.linalg.norm(axis))
    if abs(norm - 1.0) > AXIS_TOLERANCE:
        raise NonUnitAxis(norm)

    k = hat(axis)

    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


def sym_eig_bounds(a: Matrix) -> tuple[float, float]:
    asymmetry = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asymmetry > SYMMETRY_TOLERANCE:
        raise NotSymmetric(asymmetry, SYMMETRY_TOLERANCE)

    eigenvalues = np.linalg.eigvalsh(sym(a))

    return float(eigenvalues[0]), float(eigenvalues[-1])


def is_spd(a: Matrix) -> bool:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    if float(np.max(np.abs(a - a.T))) > SYMMETRY_TOLERANCE:
        return False

    return sym_eig_bounds(a)[0] > 0.0


def orthogonality_drift(r: Mat3) -> float:
    return frob_norm(r.T @ r - np.eye(3))
