"""Serial-chain kinematics: forward kinematics, geometric Jacobian, joint-space inertia.

Chains are described as an ordered list of revolute links, each carrying a fixed
transform from its parent joint frame plus a rotation axis in its own joint
frame (a URDF-like subset; no DH tables). All outputs are expressed in the
chain base frame.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import quat
from .errors import ContractError


@dataclass
class Pose:
    """Rigid transform: position in meters, orientation as scalar-last unit quaternion."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    orientation: np.ndarray = field(default_factory=lambda: quat.IDENTITY.copy())

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float).reshape(3)
        self.orientation = quat.normalize(np.asarray(self.orientation, dtype=float).reshape(4))

    def rotation(self) -> np.ndarray:
        return quat.to_matrix(self.orientation)

    def compose(self, other: "Pose") -> "Pose":
        """self * other: apply other in self's frame."""
        return Pose(
            self.position + self.rotation() @ other.position,
            quat.mul(self.orientation, other.orientation),
        )

    def inverse(self) -> "Pose":
        qi = quat.conj(self.orientation)
        return Pose(-(quat.to_matrix(qi) @ self.position), qi)

    def apply(self, point) -> np.ndarray:
        return self.position + self.rotation() @ np.asarray(point, dtype=float)

    def almost_equal(self, other: "Pose", tol=1e-9) -> bool:
        dq = min(np.linalg.norm(self.orientation - other.orientation),
                 np.linalg.norm(self.orientation + other.orientation))
        return bool(np.linalg.norm(self.position - other.position) < tol and dq < tol)

    @staticmethod
    def identity() -> "Pose":
        return Pose()

    def to_dict(self) -> dict:
        return {"position": self.position.tolist(), "orientation": self.orientation.tolist()}

    @staticmethod
    def from_dict(d: dict) -> "Pose":
        return Pose(np.asarray(d.get("position", (0, 0, 0)), dtype=float),
                    np.asarray(d.get("orientation", (0, 0, 0, 1)), dtype=float))


@dataclass
class ChainLink:
    """One revolute link: fixed transform from the parent joint frame, axis, inertial data."""

    parent_transform: Pose
    joint_axis: np.ndarray
    mass: float = 0.0
    com: np.ndarray = field(default_factory=lambda: np.zeros(3))
    inertia: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))

    def __post_init__(self):
        self.joint_axis = np.asarray(self.joint_axis, dtype=float).reshape(3)
        n = np.linalg.norm(self.joint_axis)
        if abs(n - 1.0) > 1e-12:
            raise ContractError(f"joint_axis must be unit norm, got |axis| = {n}")
        if self.mass < 0:
            raise ContractError("link mass must be >= 0")
        self.com = np.asarray(self.com, dtype=float).reshape(3)
        self.inertia = np.asarray(self.inertia, dtype=float).reshape(3, 3)
        if not np.allclose(self.inertia, self.inertia.T, atol=1e-12):
            raise ContractError("link inertia must be symmetric")
        if np.linalg.eigvalsh(self.inertia).min() < -1e-12:
            raise ContractError("link inertia must be positive semidefinite")


@dataclass
class SerialChain:
    """Base-to-tip list of revolute links plus a fixed TCP offset from the last joint frame."""

    links: list[ChainLink]
    tcp_offset: Pose = field(default_factory=Pose)

    def __post_init__(self):
        if len(self.links) < 1:
            raise ContractError("chain needs at least one link")

    @property
    def dof(self) -> int:
        return len(self.links)

    def compiled(self):
        """Flat-array pack of this chain for the compiled kernels (cached)."""
        pack = self.__dict__.get("_pack")
        if pack is None:
            pack = (
                np.array([lk.parent_transform.position for lk in self.links]),
                np.array([lk.parent_transform.rotation() for lk in self.links]),
                np.array([lk.joint_axis for lk in self.links]),
                self.tcp_offset.position.copy(),
                self.tcp_offset.rotation(),
                np.array([lk.mass for lk in self.links]),
                np.array([lk.com for lk in self.links]),
                np.array([lk.inertia for lk in self.links]),
            )
            self.__dict__["_pack"] = pack
        return pack

    def check_q(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float).reshape(-1)
        if q.shape != (self.dof,):
            raise ContractError(f"expected {self.dof} joint values, got {q.shape[0]}")
        return q

    def with_masses(self, masses, coms, inertias) -> "SerialChain":
        """Copy of the chain with replaced inertial parameters (kinematics untouched)."""
        links = [
            ChainLink(lk.parent_transform, lk.joint_axis, m, c, i)
            for lk, m, c, i in zip(self.links, masses, coms, inertias)
        ]
        return SerialChain(links, self.tcp_offset)

    def subchain(self, start: int) -> "SerialChain":
        return SerialChain(self.links[start:], self.tcp_offset)

    def to_dict(self) -> dict:
        return {
            "links": [
                {
                    "parent_transform": lk.parent_transform.to_dict(),
                    "joint_axis": lk.joint_axis.tolist(),
                    "mass": lk.mass,
                    "com": lk.com.tolist(),
                    "inertia": lk.inertia.tolist(),
                }
                for lk in self.links
            ],
            "tcp_offset": self.tcp_offset.to_dict(),
        }

    @staticmethod
    def from_dict(doc: dict) -> "SerialChain":
        links = [
            ChainLink(
                Pose.from_dict(ld.get("parent_transform", {})),
                np.asarray(ld["joint_axis"], dtype=float),
                float(ld.get("mass", 0.0)),
                np.asarray(ld.get("com", (0, 0, 0)), dtype=float),
                np.asarray(ld.get("inertia", np.zeros((3, 3))), dtype=float),
            )
            for ld in doc["links"]
        ]
        return SerialChain(links, Pose.from_dict(doc.get("tcp_offset", {})))

    @staticmethod
    def from_json(path) -> "SerialChain":
        with open(path) as f:
            return SerialChain.from_dict(json.load(f))


@dataclass
class JointState:
    """Joint positions and rates of a chain."""

    q: np.ndarray
    qdot: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float).reshape(-1)
        self.qdot = np.asarray(self.qdot, dtype=float).reshape(-1)
        if self.q.shape != self.qdot.shape:
            raise ContractError("q and qdot must have equal length")


def _skew(v):
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def chain_geometry(chain: SerialChain, q):
    """Single FK sweep returning per-joint world data reused by every routine here.

    Returns (joint_origins Nx3, joint_axes_world Nx3, link_rotations Nx3x3,
    link_origins Nx3, tcp Pose). link_* refer to the frame after the joint
    rotation, i.e. the frame the link body (com, inertia) is expressed in.
    """
    q = chain.check_q(q)
    p = np.zeros(3)
    R = np.eye(3)
    n = chain.dof
    joint_origins = np.empty((n, 3))
    joint_axes = np.empty((n, 3))
    link_rot = np.empty((n, 3, 3))
    link_org = np.empty((n, 3))
    for i, link in enumerate(chain.links):
        p = p + R @ link.parent_transform.position
        R = R @ link.parent_transform.rotation()
        joint_origins[i] = p
        joint_axes[i] = R @ link.joint_axis
        R = R @ quat.to_matrix(quat.from_axis_angle(link.joint_axis, q[i]))
        link_rot[i] = R
        link_org[i] = p
    tcp_p = p + R @ chain.tcp_offset.position
    tcp_R = R @ chain.tcp_offset.rotation()
    # rebuild the quaternion from the composed rotations to keep it exactly unit
    tcp_q = quat.IDENTITY.copy()
    for i, link in enumerate(chain.links):
        tcp_q = quat.mul(tcp_q, quat.mul(link.parent_transform.orientation,
                                         quat.from_axis_angle(link.joint_axis, q[i])))
    tcp_q = quat.normalize(quat.mul(tcp_q, chain.tcp_offset.orientation))
    return joint_origins, joint_axes, link_rot, link_org, Pose(tcp_p, tcp_q)


def forward_kinematics(chain: SerialChain, q) -> Pose:
    """TCP pose in the base frame for joint angles q."""
    return chain_geometry(chain, q)[4]


def jacobian_from_geometry(geom) -> np.ndarray:
    joint_origins, joint_axes, _, _, tcp = geom
    n = joint_origins.shape[0]
    J = np.empty((6, n))
    for j in range(n):
        z = joint_axes[j]
        J[:3, j] = np.cross(z, tcp.position - joint_origins[j])
        J[3:, j] = z
    return J


def geometric_jacobian(chain: SerialChain, q) -> np.ndarray:
    """6xN geometric Jacobian of the TCP, base frame; rows are (linear, angular)."""
    return jacobian_from_geometry(chain_geometry(chain, q))


def _spatial_inertia_about_origin(mass, com_world, inertia_world):
    """6x6 spatial inertia of one body about the world origin, [angular; linear] ordering."""
    S = _skew(com_world)
    I = np.empty((6, 6))
    I[:3, :3] = inertia_world + mass * (S @ S.T)
    I[:3, 3:] = mass * S
    I[3:, :3] = mass * S.T
    I[3:, 3:] = mass * np.eye(3)
    return I


def inertia_from_geometry(chain: SerialChain, geom) -> np.ndarray:
    joint_origins, joint_axes, link_rot, link_org, _ = geom
    n = chain.dof
    # motion subspace of each revolute joint as a world spatial vector
    S = np.empty((n, 6))
    for i in range(n):
        S[i, :3] = joint_axes[i]
        S[i, 3:] = np.cross(joint_axes[i], -joint_origins[i])
    H = np.zeros((n, n))
    composite = np.zeros((6, 6))
    for i in range(n - 1, -1, -1):
        link = chain.links[i]
        c_world = link_org[i] + link_rot[i] @ link.com
        I_world = link_rot[i] @ link.inertia @ link_rot[i].T
        composite = composite + _spatial_inertia_about_origin(link.mass, c_world, I_world)
        f = composite @ S[i]
        for j in range(i + 1):
            H[i, j] = H[j, i] = S[j] @ f
    return 0.5 * (H + H.T)


def joint_space_inertia(chain: SerialChain, q) -> np.ndarray:
    """NxN joint-space inertia H(q) by composite-rigid-body accumulation, world frame."""
    return inertia_from_geometry(chain, chain_geometry(chain, q))


def fast_fk(chain: SerialChain, q) -> Pose:
    """TCP pose via the compiled kernels; agrees with forward_kinematics."""
    from . import _kernels
    q = chain.check_q(q)
    pp, pR, ax, tp, tR, _, _, _ = chain.compiled()
    _, _, _, _, tcp_p, tcp_R = _kernels.geometry(pp, pR, ax, tp, tR, q)
    return Pose(tcp_p, _kernels.mat_to_quat(tcp_R))
