"""Frame transformation block: satellite states in the rotating R frame vs robot
TCP poses in the lab, and wrench re-expression including the measured-torque
scale-down that keeps commanded orientations inside robot safety limits."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import quat
from .errors import FrameMismatch
from .kinematics import Pose


class Frame(str, Enum):
    SENSOR = "SENSOR"
    LAB = "LAB"
    R = "R"
    TASK = "TASK"


@dataclass
class Wrench:
    """Frame-tagged force/torque pair."""

    force: np.ndarray
    torque: np.ndarray
    frame: Frame

    def __post_init__(self):
        self.force = np.asarray(self.force, dtype=float).reshape(3)
        self.torque = np.asarray(self.torque, dtype=float).reshape(3)
        self.frame = Frame(self.frame)

    @staticmethod
    def zero(frame: Frame) -> "Wrench":
        return Wrench(np.zeros(3), np.zeros(3), frame)

    def require_frame(self, frame: Frame) -> "Wrench":
        if self.frame != frame:
            raise FrameMismatch(f"expected wrench in frame {frame.value}, got {self.frame.value}")
        return self

    def __add__(self, other: "Wrench") -> "Wrench":
        other.require_frame(self.frame)
        return Wrench(self.force + other.force, self.torque + other.torque, self.frame)


@dataclass
class FrameMapping:
    """Placement of the rotating R frame inside one robot's lab workspace."""

    lab_from_R: Pose = field(default_factory=Pose)
    position_scale: float = 1.0   # orbit meters per lab meter
    torque_scale: float = 2000.0  # divisor applied to measured torques, sensor -> R only
    sensor_from_tcp: Pose = field(default_factory=Pose)

    def __post_init__(self):
        if self.position_scale <= 0:
            raise FrameMismatch(f"position_scale must be > 0, got {self.position_scale}")
        if self.torque_scale < 1:
            raise FrameMismatch(f"torque_scale must be >= 1, got {self.torque_scale}")


def sat_to_tcp(state, mapping: FrameMapping) -> Pose:
    """Lab-frame TCP pose matching a satellite state (COM-as-TCP convention)."""
    p = mapping.lab_from_R.apply(np.asarray(state.rho, dtype=float) / mapping.position_scale)
    q = quat.mul(mapping.lab_from_R.orientation, state.eps)
    return Pose(p, q)


def sat_to_tcp_twist(state, mapping: FrameMapping) -> np.ndarray:
    """Lab-frame TCP twist (v, omega) matching the satellite rates."""
    Rm = mapping.lab_from_R.rotation()
    v = Rm @ (np.asarray(state.rho_dot, dtype=float) / mapping.position_scale)
    w = Rm @ (quat.to_matrix(state.eps) @ np.asarray(state.omega_body, dtype=float))
    return np.concatenate([v, w])


def tcp_to_sat(pose: Pose, twist, mapping: FrameMapping):
    """Inverse of sat_to_tcp / sat_to_tcp_twist: (rho, rho_dot, eps, omega_body)."""
    RmT = mapping.lab_from_R.rotation().T
    rho = mapping.position_scale * (RmT @ (pose.position - mapping.lab_from_R.position))
    eps = quat.normalize(quat.mul(quat.conj(mapping.lab_from_R.orientation), pose.orientation))
    twist = np.asarray(twist, dtype=float).reshape(6)
    rho_dot = mapping.position_scale * (RmT @ twist[:3])
    omega_body = quat.to_matrix(eps).T @ (RmT @ twist[3:])
    return rho, rho_dot, eps, omega_body


def _sensor_rotation_lab(tcp_pose: Pose, mapping: FrameMapping):
    return tcp_pose.rotation() @ mapping.sensor_from_tcp.rotation()


def wrench_sensor_to_R(w: Wrench, tcp_pose: Pose, mapping: FrameMapping) -> Wrench:
    """Express a sensed wrench in R axes; measured torque is divided by torque_scale."""
    w.require_frame(Frame.SENSOR)
    Rx = mapping.sensor_from_tcp.rotation()
    f_tcp = Rx @ w.force
    # moment shift from the sensor origin to the TCP (zero with the default offsets)
    t_tcp = Rx @ w.torque + np.cross(mapping.sensor_from_tcp.position, f_tcp)
    R_lab = tcp_pose.rotation()
    RmT = mapping.lab_from_R.rotation().T
    f_R = RmT @ (R_lab @ f_tcp)
    t_R = (RmT @ (R_lab @ t_tcp)) / mapping.torque_scale
    return Wrench(f_R, t_R, Frame.R)


def wrench_R_to_sensor(w: Wrench, tcp_pose: Pose, mapping: FrameMapping) -> Wrench:
    """Physical transform of a true R-frame wrench into sensor axes (no scaling)."""
    w.require_frame(Frame.R)
    Rm = mapping.lab_from_R.rotation()
    RlT = tcp_pose.rotation().T
    f_tcp = RlT @ (Rm @ w.force)
    t_tcp = RlT @ (Rm @ w.torque)
    Rx = mapping.sensor_from_tcp.rotation()
    f_s = Rx.T @ f_tcp
    t_s = Rx.T @ (t_tcp - np.cross(mapping.sensor_from_tcp.position, f_tcp))
    return Wrench(f_s, t_s, Frame.SENSOR)
