"""Simulated position-controlled robot and instrumentation: first-order joint
servo with rate and travel limits, noisy force/torque sensing, and the
safety-stop check that freezes a robot at its joint limits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError
from .frames import Frame, Wrench
from .kinematics import Pose, SerialChain, forward_kinematics


@dataclass
class ServoParams:
    """First-order tracking model of the vendor position controller."""

    time_constant: float = 0.02
    qdot_max: np.ndarray = field(default_factory=lambda: np.full(6, 2.0))
    q_min: np.ndarray = field(default_factory=lambda: np.full(6, -2 * np.pi))
    q_max: np.ndarray = field(default_factory=lambda: np.full(6, 2 * np.pi))

    def __post_init__(self):
        self.qdot_max = np.atleast_1d(np.asarray(self.qdot_max, dtype=float))
        self.q_min = np.atleast_1d(np.asarray(self.q_min, dtype=float))
        self.q_max = np.atleast_1d(np.asarray(self.q_max, dtype=float))
        if self.time_constant <= 0:
            raise ContractError("time_constant must be > 0")
        if np.any(self.qdot_max <= 0):
            raise ContractError("qdot_max must be > 0")
        if np.any(self.q_min >= self.q_max):
            raise ContractError("q_min must be < q_max elementwise")


@dataclass
class SensorParams:
    noise_sigma_force: float = 0.1
    noise_sigma_torque: float = 0.005
    bias: Wrench = field(default_factory=lambda: Wrench.zero(Frame.SENSOR))
    seed: int = 0

    def __post_init__(self):
        if self.noise_sigma_force < 0 or self.noise_sigma_torque < 0:
            raise ContractError("noise sigmas must be >= 0")
        self.bias.require_frame(Frame.SENSOR)


def servo_step(q, q_cmd, params: ServoParams, dt: float) -> np.ndarray:
    """First-order move toward q_cmd with rate limiting and travel clamping."""
    if dt <= 0:
        raise ContractError(f"dt must be > 0, got {dt}")
    q = np.asarray(q, dtype=float)
    q_cmd = np.asarray(q_cmd, dtype=float)
    rate = np.clip((q_cmd - q) / params.time_constant, -params.qdot_max, params.qdot_max)
    return np.clip(q + rate * dt, params.q_min, params.q_max)


def sensor_rng(seed: int, sensor_index: int, tick: int) -> np.random.Generator:
    """Counter-based stream: one generator per (seed, sensor, tick), replayable."""
    return np.random.Generator(
        np.random.Philox(key=np.uint64(seed * 1000003 + sensor_index),
                         counter=[np.uint64(tick), 0, 0, 0])
    )


def measure_wrench(true_wrench: Wrench, params: SensorParams,
                   rng: np.random.Generator) -> Wrench:
    """True wrench plus bias and independent per-axis Gaussian noise."""
    true_wrench.require_frame(Frame.SENSOR)
    f = true_wrench.force + params.bias.force
    t = true_wrench.torque + params.bias.torque
    if params.noise_sigma_force > 0:
        f = f + rng.normal(0.0, params.noise_sigma_force, 3)
    if params.noise_sigma_torque > 0:
        t = t + rng.normal(0.0, params.noise_sigma_torque, 3)
    return Wrench(f, t, Frame.SENSOR)


def check_safety(q, params: ServoParams, tol=1e-9):
    """None when all joints are clear of their limits, else the first offending index."""
    q = np.asarray(q, dtype=float)
    at_limit = (q <= params.q_min + tol) | (q >= params.q_max - tol)
    if np.any(at_limit):
        return int(np.argmax(at_limit))
    return None


def mockup_pose(chain: SerialChain, q) -> Pose:
    """Mockup COM pose; the COM is the TCP by convention."""
    return forward_kinematics(chain, q)
