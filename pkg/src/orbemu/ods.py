"""Orbital dynamics simulator: Clohessy-Wiltshire translation about a circular
virtual-observer orbit plus rigid-body attitude (Euler equations + quaternion
kinematics), integrated with fixed-step RK4.

The per-step math lives twice on purpose: plain numpy functions expose each
term for unit-level checks, while a numba kernel runs the long propagation
loops; a cross-check test keeps the two in lockstep.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import quat
from .errors import ContractError
from .frames import Frame, FrameMapping, Wrench, sat_to_tcp

MU_EARTH = 3.986004418e14  # m^3/s^2
R_EARTH = 6378137.0        # m


@dataclass
class OrbitParams:
    """Circular virtual-observer orbit; angular rate follows from mu and a."""

    mu: float = MU_EARTH
    a: float = R_EARTH + 800e3  # 800 km altitude reference orbit

    def __post_init__(self):
        if self.mu <= 0 or self.a <= 0:
            raise ContractError("mu and a must be positive")

    @property
    def omega(self) -> float:
        return float(np.sqrt(self.mu / self.a**3))


@dataclass
class SatelliteBody:
    name: str = "sat"
    mass: float = 1.0
    inertia_principal: np.ndarray = field(
        default_factory=lambda: np.array([4.1666667e-3, 4.1666667e-3, 6.6666667e-3])
    )
    collision_radius: float = 0.15

    def __post_init__(self):
        self.inertia_principal = np.asarray(self.inertia_principal, dtype=float).reshape(3)
        if self.mass <= 0:
            raise ContractError(f"satellite mass must be > 0, got {self.mass}")
        I1, I2, I3 = self.inertia_principal
        if min(I1, I2, I3) <= 0:
            raise ContractError("principal inertias must be > 0")
        if I1 + I2 < I3 or I2 + I3 < I1 or I3 + I1 < I2:
            raise ContractError("principal inertias violate the triangle inequality")


def cubesat_4u(name="sat") -> SatelliteBody:
    """Uniform-density 4U (2x2) cuboid, 1 kg, 0.2 x 0.2 x 0.1 m."""
    return SatelliteBody(name=name)


@dataclass
class SatelliteState:
    """Translation in the rotating R frame plus body attitude and rates."""

    rho: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rho_dot: np.ndarray = field(default_factory=lambda: np.zeros(3))
    eps: np.ndarray = field(default_factory=lambda: quat.IDENTITY.copy())
    omega_body: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=float).reshape(3)
        self.rho_dot = np.asarray(self.rho_dot, dtype=float).reshape(3)
        self.eps = quat.normalize(quat.check_unit(np.asarray(self.eps, dtype=float).reshape(4)))
        self.omega_body = np.asarray(self.omega_body, dtype=float).reshape(3)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.rho, self.rho_dot, self.eps, self.omega_body])

    @staticmethod
    def from_vector(s) -> "SatelliteState":
        s = np.asarray(s, dtype=float)
        return SatelliteState(s[0:3], s[3:6], s[6:10], s[10:13])


def cw_acceleration(state: SatelliteState, wrench_R: Wrench, params: OrbitParams,
                    mass: float) -> np.ndarray:
    """Relative translational acceleration in R under the CW model plus F/m."""
    wrench_R.require_frame(Frame.R)
    n = params.omega
    x, _, z = state.rho
    vx, vy, _ = state.rho_dot
    F = wrench_R.force
    return np.array([
        3 * n * n * x + 2 * n * vy + F[0] / mass,
        -2 * n * vx + F[1] / mass,
        -n * n * z + F[2] / mass,
    ])


def attitude_rates(omega_body, torque_body, body: SatelliteBody) -> np.ndarray:
    """Euler equations about the principal axes."""
    w1, w2, w3 = np.asarray(omega_body, dtype=float)
    T = np.asarray(torque_body, dtype=float)
    I1, I2, I3 = body.inertia_principal
    return np.array([
        (I3 - I2) / I1 * w2 * w3 + T[0] / I1,
        (I1 - I3) / I2 * w1 * w3 + T[1] / I2,
        (I2 - I1) / I3 * w1 * w2 + T[2] / I3,
    ])


def quat_rate(eps, omega_body) -> np.ndarray:
    """Scalar-last quaternion kinematics, 0.5 * Q(eps) * (w1, w2, w3, 0)."""
    ex, ey, ez, ew = eps
    w1, w2, w3 = omega_body
    Q = np.array([
        [ew, -ez, ey, ex],
        [ez, ew, -ex, ey],
        [-ey, ex, ew, ez],
        [-ex, -ey, -ez, ew],
    ])
    return 0.5 * (Q @ np.array([w1, w2, w3, 0.0]))


def quat_to_rotation(eps) -> np.ndarray:
    """Rotation matrix of the body frame relative to R."""
    return quat.to_matrix(quat.check_unit(np.asarray(eps, dtype=float)))


@njit(cache=True)
def _deriv(s, F, T_R, mass, I1, I2, I3, n, gg):
    d = np.empty(13)
    d[0:3] = s[3:6]
    d[3] = 3 * n * n * s[0] + 2 * n * s[4] + F[0] / mass
    d[4] = -2 * n * s[3] + F[1] / mass
    d[5] = -n * n * s[2] + F[2] / mass
    ex, ey, ez, ew = s[6], s[7], s[8], s[9]
    w1, w2, w3 = s[10], s[11], s[12]
    # body-to-R rotation matrix of the current quaternion
    C = np.empty((3, 3))
    C[0, 0] = 1 - 2 * (ey * ey + ez * ez)
    C[0, 1] = 2 * (ex * ey - ez * ew)
    C[0, 2] = 2 * (ex * ez + ey * ew)
    C[1, 0] = 2 * (ex * ey + ez * ew)
    C[1, 1] = 1 - 2 * (ex * ex + ez * ez)
    C[1, 2] = 2 * (ey * ez - ex * ew)
    C[2, 0] = 2 * (ex * ez - ey * ew)
    C[2, 1] = 2 * (ey * ez + ex * ew)
    C[2, 2] = 1 - 2 * (ex * ex + ey * ey)
    Tb = C.T @ T_R
    if gg:
        # gravity-gradient torque 3 n^2 c x (I c), c = body-frame nadir (-x of R)
        c0, c1, c2 = -C[0, 0], -C[0, 1], -C[0, 2]
        h0, h1, h2 = I1 * c0, I2 * c1, I3 * c2
        Tb[0] += 3 * n * n * (c1 * h2 - c2 * h1)
        Tb[1] += 3 * n * n * (c2 * h0 - c0 * h2)
        Tb[2] += 3 * n * n * (c0 * h1 - c1 * h0)
    d[6] = 0.5 * (ew * w1 - ez * w2 + ey * w3)
    d[7] = 0.5 * (ez * w1 + ew * w2 - ex * w3)
    d[8] = 0.5 * (-ey * w1 + ex * w2 + ew * w3)
    d[9] = 0.5 * (-ex * w1 - ey * w2 - ez * w3)
    d[10] = (I3 - I2) / I1 * w2 * w3 + Tb[0] / I1
    d[11] = (I1 - I3) / I2 * w1 * w3 + Tb[1] / I2
    d[12] = (I2 - I1) / I3 * w1 * w2 + Tb[2] / I3
    return d


@njit(cache=True)
def _rk4_n(s, F, T_R, mass, I1, I2, I3, n, dt, steps, gg):
    s = s.copy()
    for _ in range(steps):
        k1 = _deriv(s, F, T_R, mass, I1, I2, I3, n, gg)
        k2 = _deriv(s + 0.5 * dt * k1, F, T_R, mass, I1, I2, I3, n, gg)
        k3 = _deriv(s + 0.5 * dt * k2, F, T_R, mass, I1, I2, I3, n, gg)
        k4 = _deriv(s + dt * k3, F, T_R, mass, I1, I2, I3, n, gg)
        s = s + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        norm = np.sqrt(s[6] ** 2 + s[7] ** 2 + s[8] ** 2 + s[9] ** 2)
        s[6:10] /= norm
    return s


def propagate(state: SatelliteState, wrench_R: Wrench, body: SatelliteBody,
              params: OrbitParams, dt: float, gravity_gradient=False) -> SatelliteState:
    """One RK4 step under a zero-order-held R-frame wrench."""
    return propagate_n(state, wrench_R, body, params, dt, 1, gravity_gradient)


def propagate_n(state: SatelliteState, wrench_R: Wrench, body: SatelliteBody,
                params: OrbitParams, dt: float, steps: int,
                gravity_gradient=False) -> SatelliteState:
    """steps RK4 steps with the wrench held constant; quaternion renormalized each step."""
    if dt <= 0:
        raise ContractError(f"dt must be > 0, got {dt}")
    wrench_R.require_frame(Frame.R)
    I1, I2, I3 = body.inertia_principal
    s = _rk4_n(state.as_vector(), wrench_R.force, wrench_R.torque, body.mass,
               I1, I2, I3, params.omega, dt, steps, gravity_gradient)
    return SatelliteState.from_vector(s)


def cw_analytic(rho0, rho_dot0, t, omega: float):
    """Closed-form force-free CW solution; t may be a scalar or an array.

    Returns (rho, rho_dot) with leading time axis when t is an array.
    """
    t = np.asarray(t, dtype=float)
    n = omega
    x0, y0, z0 = np.asarray(rho0, dtype=float)
    vx0, vy0, vz0 = np.asarray(rho_dot0, dtype=float)
    snt, cnt = np.sin(n * t), np.cos(n * t)
    x = (4 - 3 * cnt) * x0 + snt / n * vx0 + 2 / n * (1 - cnt) * vy0
    y = 6 * (snt - n * t) * x0 + y0 - 2 / n * (1 - cnt) * vx0 + (4 * snt - 3 * n * t) / n * vy0
    z = cnt * z0 + snt / n * vz0
    vx = 3 * n * snt * x0 + cnt * vx0 + 2 * snt * vy0
    vy = -6 * n * (1 - cnt) * x0 - 2 * snt * vx0 + (4 * cnt - 3) * vy0
    vz = -n * snt * z0 + cnt * vz0
    rho = np.stack([x, y, z], axis=-1)
    rho_dot = np.stack([vx, vy, vz], axis=-1)
    return rho, rho_dot


def waypoint_stream(history, sample_rate: float, mapping: FrameMapping):
    """Sample a propagated state history at uniform intervals into TCP waypoints.

    history is a sequence of (t, SatelliteState) with nondecreasing times; the
    state in force at each sample instant (zero-order hold) is mapped through
    the frame transformation. Returns a list of (t, Pose).
    """
    if sample_rate <= 0:
        raise ContractError(f"sample_rate must be > 0, got {sample_rate}")
    if not history:
        return []
    times = np.array([t for t, _ in history])
    t0, t_end = times[0], times[-1]
    out = []
    k = 0
    while True:
        ts = t0 + k / sample_rate
        if ts > t_end + 1e-12:
            break
        idx = int(np.searchsorted(times, ts + 1e-12, side="right") - 1)
        out.append((ts, sat_to_tcp(history[idx][1], mapping)))
        k += 1
    return out
