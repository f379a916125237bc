"""Virtual-forward-dynamics Cartesian motion control.

A PD law on the pose error produces a wrench that drives a fictitious,
mass-conditioned copy of the manipulator; integrating its joint response
from rest for one virtual time step yields the next joint set-point, so the
virtual model doubles as an IK solver. All link masses except the tip are
made small, which flattens the task-space inertia across configurations and
keeps the mapping well behaved at singularities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import quat
from .chains import conditioned_chain
from .errors import ContractError, SolverError
from .frames import Frame, Wrench
from .kinematics import (Pose, SerialChain, chain_geometry, inertia_from_geometry,
                         jacobian_from_geometry)


@dataclass
class VfdmParams:
    """Controller gains and virtual-model conditioning.

    Gain and mass defaults mirror the reference controller tuning
    (P 10.0 / D 0.0 translational, P 1.0 / D 0.0 rotational, 1 kg tip link,
    0.01 kg remaining links, identity tip inertia and 1e-6 of it elsewhere).
    """

    kp_trans: float = 10.0
    kd_trans: float = 0.0
    kp_rot: float = 1.0
    kd_rot: float = 0.0
    m_e: float = 1.0
    m_l: float = 0.01
    I_e: np.ndarray = field(default_factory=lambda: np.eye(3))
    I_l: np.ndarray = field(default_factory=lambda: 1e-6 * np.eye(3))
    dt_ctrl: float = 0.05
    max_iters: int = 50000
    tol_pos: float = 1e-4
    tol_rot: float = 1e-3
    regularization: float | None = None  # default 1e-3: keeps per-cycle steps bounded near singularities

    def __post_init__(self):
        self.I_e = np.asarray(self.I_e, dtype=float).reshape(3, 3)
        self.I_l = np.asarray(self.I_l, dtype=float).reshape(3, 3)
        for name in ("kp_trans", "kd_trans", "kp_rot", "kd_rot"):
            if getattr(self, name) < 0:
                raise ContractError(f"{name} must be >= 0")
        if self.m_e <= 0:
            raise ContractError("m_e must be > 0")
        if self.m_l < 0:
            raise ContractError("m_l must be >= 0")
        if self.dt_ctrl <= 0:
            raise ContractError("dt_ctrl must be > 0")
        if self.regularization is not None and self.regularization < 0:
            raise ContractError("regularization must be >= 0")

    @property
    def lam(self) -> float:
        return 1e-3 if self.regularization is None else self.regularization


@dataclass
class CartesianError:
    """Translational offset plus rotation-vector (axis * angle) orientation error."""

    translational: np.ndarray
    rotational: np.ndarray

    def __post_init__(self):
        self.translational = np.asarray(self.translational, dtype=float).reshape(3)
        self.rotational = np.asarray(self.rotational, dtype=float).reshape(3)

    @staticmethod
    def zero() -> "CartesianError":
        return CartesianError(np.zeros(3), np.zeros(3))

    def norms(self):
        return np.linalg.norm(self.translational), np.linalg.norm(self.rotational)


def virtual_chain(chain: SerialChain, params: VfdmParams) -> SerialChain:
    """The conditioned virtual model sharing the chain's kinematics."""
    return conditioned_chain(chain, params.m_e, params.I_e, params.m_l, params.I_l)


def pose_error(target: Pose, current: Pose) -> CartesianError:
    """Error from current toward target; rotation as the shortest axis-angle vector."""
    quat.check_unit(target.orientation)
    quat.check_unit(current.orientation)
    dq = quat.mul(target.orientation, quat.conj(current.orientation))
    return CartesianError(target.position - current.position, quat.to_axis_angle(dq))


def control_wrench(e: CartesianError, e_dot: CartesianError | None,
                   params: VfdmParams) -> Wrench:
    """PD law mapping pose error (and its rate) to a virtual task-space wrench."""
    if e_dot is None:
        e_dot = CartesianError.zero()
    force = params.kp_trans * e.translational + params.kd_trans * e_dot.translational
    torque = params.kp_rot * e.rotational + params.kd_rot * e_dot.rotational
    return Wrench(force, torque, Frame.TASK)


def _solve_spd(H, lam, rhs, q):
    A = H + lam * np.eye(H.shape[0])
    try:
        c = scipy.linalg.cho_factor(A, check_finite=False)
    except scipy.linalg.LinAlgError as err:
        raise SolverError(
            f"virtual inertia matrix not positive definite at q={np.array2string(np.asarray(q))}"
        ) from err
    return scipy.linalg.cho_solve(c, rhs, check_finite=False)


def forward_dynamics_accel(chain: SerialChain, q, f: Wrench, lam=1e-8) -> np.ndarray:
    """Joint accelerations of the (conditioned) virtual model under task wrench f."""
    f.require_frame(Frame.TASK)
    geom = chain_geometry(chain, q)
    J = jacobian_from_geometry(geom)
    H = inertia_from_geometry(chain, geom)
    f6 = np.concatenate([f.force, f.torque])
    return _solve_spd(H, lam, J.T @ f6, q)


def operational_space_inertia_inv(chain: SerialChain, q, lam=1e-8) -> np.ndarray:
    """J (H + lam I)^-1 J^T: inverse task-space inertia of the virtual model."""
    geom = chain_geometry(chain, q)
    J = jacobian_from_geometry(geom)
    H = inertia_from_geometry(chain, geom)
    Minv = J @ _solve_spd(H, lam, J.T, q)
    return 0.5 * (Minv + Minv.T)


def vfdm_cycle(chain: SerialChain, q, target: Pose, params: VfdmParams,
               e_dot: CartesianError | None = None):
    """One control cycle of the virtual model, started from rest.

    chain must be the conditioned virtual chain (see virtual_chain). Returns
    (q_next, e); the outcome is a pure function of the arguments.
    """
    from . import _kernels
    q = chain.check_q(q)
    if e_dot is None:
        fd_t = fd_r = np.zeros(3)
    else:
        fd_t = params.kd_trans * e_dot.translational
        fd_r = params.kd_rot * e_dot.rotational
    quat.check_unit(target.orientation)
    pp, pR, ax, tp, tR, mass, com, inertia = chain.compiled()
    q_next, e_t, e_r, ok = _kernels.cycle(
        pp, pR, ax, tp, tR, mass, com, inertia,
        q, target.position, target.rotation(),
        params.kp_trans, params.kp_rot, fd_t, fd_r, params.dt_ctrl, params.lam)
    if not ok:
        raise SolverError(
            f"virtual inertia matrix not positive definite at q={np.array2string(q)}")
    return q_next, CartesianError(e_t, e_r)


_RESTART_SEED = 0xC0FFEE
_N_PRESAMPLE = 64
_STALL_WINDOW = 600
_STALL_REL = 1e-3


def solve_to_convergence(chain: SerialChain, q0, target: Pose, params: VfdmParams):
    """Iterate vfdm_cycle until the pose error is inside tolerance.

    chain is the kinematic chain; the conditioned virtual model is built here.
    Returns (q, iterations, converged); non-convergence is a reported outcome,
    in which case q is the best iterate seen.

    The cycle dynamics descend a pose-error potential, so they can stall in a
    local minimum where J^T f vanishes with f != 0. To make the offline mode
    reliable, the start point is chosen from a fixed pool of candidate
    configurations (q0 plus deterministic pseudo-random samples, ranked by
    initial error), and a run whose error stops improving is restarted from
    the next candidate. The whole procedure is deterministic.
    """
    from .kinematics import forward_kinematics

    vchain = virtual_chain(chain, params)
    q0 = vchain.check_q(q0).copy()
    rng = np.random.default_rng(_RESTART_SEED)
    candidates = [q0] + [rng.uniform(-np.pi, np.pi, vchain.dof)
                         for _ in range(_N_PRESAMPLE)]

    def score_at(qc):
        tn, rn = pose_error(target, forward_kinematics(chain, qc)).norms()
        return tn + 0.1 * rn

    candidates.sort(key=score_at)
    q = candidates.pop(0)
    best_score, best_q = np.inf, q
    history: list[float] = []
    e_prev = None
    use_kd = params.kd_trans > 0 or params.kd_rot > 0
    for it in range(params.max_iters + 1):
        e_dot = None
        if use_kd and e_prev is not None:
            # e of the previous iterate is recomputed inside vfdm_cycle; the finite
            # difference below feeds the D terms only
            e_dot = CartesianError(
                (e_prev[1].translational - e_prev[0].translational) / params.dt_ctrl,
                (e_prev[1].rotational - e_prev[0].rotational) / params.dt_ctrl,
            )
        q_next, e = vfdm_cycle(vchain, q, target, params, e_dot)
        tn, rn = e.norms()
        score = tn + 0.1 * rn
        if score < best_score:
            best_score, best_q = score, q.copy()
        if tn < params.tol_pos and rn < params.tol_rot:
            return q, it, True
        history.append(score)
        stalled = (len(history) > _STALL_WINDOW
                   and history[-_STALL_WINDOW - 1] - history[-1]
                   < _STALL_REL * history[-_STALL_WINDOW - 1])
        if stalled:
            q = candidates.pop(0) if candidates else rng.uniform(-np.pi, np.pi, vchain.dof)
            history.clear()
            e_prev = None
        else:
            e_prev = (e_prev[1], e) if e_prev is not None else (e, e)
            q = q_next
    return best_q, params.max_iters, False
