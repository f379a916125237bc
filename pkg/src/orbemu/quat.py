"""Unit-quaternion helpers, scalar-last convention (x, y, z, w)."""

import numpy as np

from .errors import ContractError

IDENTITY = np.array([0.0, 0.0, 0.0, 1.0])


def normalize(q):
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if n == 0.0:
        raise ContractError("cannot normalize zero quaternion")
    return q / n


def check_unit(q, tol=1e-6):
    q = np.asarray(q, dtype=float)
    if q.shape != (4,):
        raise ContractError(f"quaternion must be a 4-vector, got shape {q.shape}")
    if abs(np.linalg.norm(q) - 1.0) > tol:
        raise ContractError(f"quaternion norm {np.linalg.norm(q)!r} differs from 1 by more than {tol}")
    return q


def mul(q1, q2):
    """Hamilton product q1 * q2 (both scalar-last)."""
    x1, y1, z1, w1 = q1
    x2, y2, z2, w2 = q2
    return np.array([
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
    ])


def conj(q):
    x, y, z, w = q
    return np.array([-x, -y, -z, w])


def rotate(q, v):
    """Rotate 3-vector v by quaternion q."""
    return to_matrix(q) @ np.asarray(v, dtype=float)


def to_matrix(q):
    """Rotation matrix of a unit quaternion."""
    x, y, z, w = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


def from_axis_angle(axis, angle):
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n == 0.0:
        return IDENTITY.copy()
    half = 0.5 * angle
    return np.concatenate([np.sin(half) * axis / n, [np.cos(half)]])


def to_axis_angle(q):
    """Rotation vector (axis * angle) of a unit quaternion, angle in [0, pi]."""
    q = np.asarray(q, dtype=float)
    if q[3] < 0.0:
        q = -q
    v = q[:3]
    s = np.linalg.norm(v)
    if s < 1e-15:
        return np.zeros(3)
    angle = 2.0 * np.arctan2(s, q[3])
    return v / s * angle
