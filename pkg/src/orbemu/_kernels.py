"""Compiled hot path for the per-tick controller math.

The numpy implementations in kinematics.py stay the reference; these kernels
reproduce them on flat arrays so the harness can run two 1 kHz control loops
at desk-scale speed. A cross-check test keeps both paths in agreement.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _rodrigues(axis, angle):
    c, s = np.cos(angle), np.sin(angle)
    x, y, z = axis
    C = 1.0 - c
    R = np.empty((3, 3))
    R[0, 0] = c + x * x * C
    R[0, 1] = x * y * C - z * s
    R[0, 2] = x * z * C + y * s
    R[1, 0] = y * x * C + z * s
    R[1, 1] = c + y * y * C
    R[1, 2] = y * z * C - x * s
    R[2, 0] = z * x * C - y * s
    R[2, 1] = z * y * C + x * s
    R[2, 2] = c + z * z * C
    return R


@njit(cache=True)
def mat_to_quat(R):
    """Scalar-last unit quaternion from a rotation matrix (Shepperd branching)."""
    q = np.empty(4)
    tr = R[0, 0] + R[1, 1] + R[2, 2]
    if tr > 0.0:
        s = np.sqrt(tr + 1.0) * 2.0
        q[3] = 0.25 * s
        q[0] = (R[2, 1] - R[1, 2]) / s
        q[1] = (R[0, 2] - R[2, 0]) / s
        q[2] = (R[1, 0] - R[0, 1]) / s
    elif R[0, 0] > R[1, 1] and R[0, 0] > R[2, 2]:
        s = np.sqrt(1.0 + R[0, 0] - R[1, 1] - R[2, 2]) * 2.0
        q[3] = (R[2, 1] - R[1, 2]) / s
        q[0] = 0.25 * s
        q[1] = (R[0, 1] + R[1, 0]) / s
        q[2] = (R[0, 2] + R[2, 0]) / s
    elif R[1, 1] > R[2, 2]:
        s = np.sqrt(1.0 + R[1, 1] - R[0, 0] - R[2, 2]) * 2.0
        q[3] = (R[0, 2] - R[2, 0]) / s
        q[0] = (R[0, 1] + R[1, 0]) / s
        q[1] = 0.25 * s
        q[2] = (R[1, 2] + R[2, 1]) / s
    else:
        s = np.sqrt(1.0 + R[2, 2] - R[0, 0] - R[1, 1]) * 2.0
        q[3] = (R[1, 0] - R[0, 1]) / s
        q[0] = (R[0, 2] + R[2, 0]) / s
        q[1] = (R[1, 2] + R[2, 1]) / s
        q[2] = 0.25 * s
    return q / np.sqrt(q[0] ** 2 + q[1] ** 2 + q[2] ** 2 + q[3] ** 2)


@njit(cache=True)
def rot_to_axis_angle(R):
    """Rotation vector (axis * angle, angle in [0, pi]) of a rotation matrix."""
    q = mat_to_quat(R)
    if q[3] < 0.0:
        q = -q
    s = np.sqrt(q[0] ** 2 + q[1] ** 2 + q[2] ** 2)
    out = np.zeros(3)
    if s < 1e-15:
        return out
    angle = 2.0 * np.arctan2(s, q[3])
    out[0] = q[0] / s * angle
    out[1] = q[1] / s * angle
    out[2] = q[2] / s * angle
    return out


@njit(cache=True)
def geometry(parent_p, parent_R, axis, tcp_p, tcp_R, q):
    n = q.shape[0]
    jo = np.empty((n, 3))
    ja = np.empty((n, 3))
    link_R = np.empty((n, 3, 3))
    link_p = np.empty((n, 3))
    p = np.zeros(3)
    R = np.eye(3)
    for i in range(n):
        p = p + R @ parent_p[i]
        R = R @ parent_R[i]
        jo[i] = p
        ja[i] = R @ axis[i]
        R = R @ _rodrigues(axis[i], q[i])
        link_R[i] = R
        link_p[i] = p
    tp = p + R @ tcp_p
    tR = R @ tcp_R
    return jo, ja, link_R, link_p, tp, tR


@njit(cache=True)
def jacobian(jo, ja, tp):
    n = jo.shape[0]
    J = np.empty((6, n))
    for j in range(n):
        r = tp - jo[j]
        J[0, j] = ja[j, 1] * r[2] - ja[j, 2] * r[1]
        J[1, j] = ja[j, 2] * r[0] - ja[j, 0] * r[2]
        J[2, j] = ja[j, 0] * r[1] - ja[j, 1] * r[0]
        J[3, j] = ja[j, 0]
        J[4, j] = ja[j, 1]
        J[5, j] = ja[j, 2]
    return J


@njit(cache=True)
def crba(jo, ja, link_R, link_p, mass, com, inertia):
    n = jo.shape[0]
    S = np.empty((n, 6))
    for i in range(n):
        S[i, 0] = ja[i, 0]
        S[i, 1] = ja[i, 1]
        S[i, 2] = ja[i, 2]
        # linear part: axis x (-origin)
        S[i, 3] = -(ja[i, 1] * jo[i, 2] - ja[i, 2] * jo[i, 1])
        S[i, 4] = -(ja[i, 2] * jo[i, 0] - ja[i, 0] * jo[i, 2])
        S[i, 5] = -(ja[i, 0] * jo[i, 1] - ja[i, 1] * jo[i, 0])
    H = np.zeros((n, n))
    comp = np.zeros((6, 6))
    for i in range(n - 1, -1, -1):
        c = link_p[i] + link_R[i] @ com[i]
        Iw = link_R[i] @ inertia[i] @ link_R[i].T
        m = mass[i]
        Sk = np.empty((3, 3))
        Sk[0, 0] = 0.0
        Sk[0, 1] = -c[2]
        Sk[0, 2] = c[1]
        Sk[1, 0] = c[2]
        Sk[1, 1] = 0.0
        Sk[1, 2] = -c[0]
        Sk[2, 0] = -c[1]
        Sk[2, 1] = c[0]
        Sk[2, 2] = 0.0
        comp[:3, :3] += Iw + m * (Sk @ Sk.T)
        comp[:3, 3:] += m * Sk
        comp[3:, :3] += m * Sk.T
        comp[3:, 3:] += m * np.eye(3)
        f = comp @ S[i]
        for j in range(i + 1):
            v = 0.0
            for k in range(6):
                v += S[j, k] * f[k]
            H[i, j] = v
            H[j, i] = v
    return H


@njit(cache=True)
def spd_solve(A, b):
    """Cholesky solve; returns (x, ok). ok=False when A is not positive definite."""
    n = A.shape[0]
    L = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            s = A[i, j]
            for k in range(j):
                s -= L[i, k] * L[j, k]
            if i == j:
                if s <= 0.0:
                    return np.zeros(n), False
                L[i, i] = np.sqrt(s)
            else:
                L[i, j] = s / L[j, j]
    x = np.empty(n)
    for i in range(n):
        s = b[i]
        for k in range(i):
            s -= L[i, k] * x[k]
        x[i] = s / L[i, i]
    for i in range(n - 1, -1, -1):
        s = x[i]
        for k in range(i + 1, n):
            s -= L[k, i] * x[k]
        x[i] = s / L[i, i]
    return x, True


@njit(cache=True)
def cycle(parent_p, parent_R, axis, tcp_p, tcp_R, mass, com, inertia,
          q, target_p, target_R, kp_t, kp_r, fd_t, fd_r, dt, lam):
    """One virtual-forward-dynamics cycle from rest.

    fd_t / fd_r are the optional D-term force contributions, zero by default.
    Returns (q_next, e_trans, e_rot, ok).
    """
    jo, ja, link_R, link_p, tp, tR = geometry(parent_p, parent_R, axis, tcp_p, tcp_R, q)
    e_t = target_p - tp
    e_r = rot_to_axis_angle(target_R @ tR.T)
    f6 = np.empty(6)
    f6[0] = kp_t * e_t[0] + fd_t[0]
    f6[1] = kp_t * e_t[1] + fd_t[1]
    f6[2] = kp_t * e_t[2] + fd_t[2]
    f6[3] = kp_r * e_r[0] + fd_r[0]
    f6[4] = kp_r * e_r[1] + fd_r[1]
    f6[5] = kp_r * e_r[2] + fd_r[2]
    if not np.any(f6):
        return q.copy(), e_t, e_r, True
    J = jacobian(jo, ja, tp)
    H = crba(jo, ja, link_R, link_p, mass, com, inertia)
    for i in range(q.shape[0]):
        H[i, i] += lam
    qdd, ok = spd_solve(H, J.T @ f6)
    if not ok:
        return q.copy(), e_t, e_r, False
    return q + qdd * (dt * dt), e_t, e_r, True
