"""Sphere-proxy contact between two mockups: detection plus a clamped linear
spring-damper (Kelvin-Voigt) force, equal and opposite by construction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .frames import Frame, Wrench
from .kinematics import Pose


@dataclass
class ContactParams:
    stiffness: float = 20.0  # N/m; soft sponge-like contact, penetration well above tracking lag
    damping: float = 4.0     # N*s/m; subcritical, so impacts rebound with reduced speed

    def __post_init__(self):
        if self.stiffness <= 0:
            raise ContractError("stiffness must be > 0")
        if self.damping < 0:
            raise ContractError("damping must be >= 0")


@dataclass
class Contact:
    depth: float
    normal: np.ndarray  # unit vector from body 1 toward body 2
    point: np.ndarray


def detect(p1: Pose, r1: float, p2: Pose, r2: float):
    """Sphere-sphere overlap test; None when separated."""
    if r1 <= 0 or r2 <= 0:
        raise ContractError("collision radii must be > 0")
    d = p2.position - p1.position
    dist = float(np.linalg.norm(d))
    depth = (r1 + r2) - dist
    if depth < 0:
        return None
    if dist < 1e-12:
        raise ContractError("coincident centers: contact normal is degenerate")
    normal = d / dist
    point = p1.position + (r1 - 0.5 * depth) * normal
    return Contact(depth, normal, point)


def contact_wrench(depth: float, normal, rel_velocity_at_contact,
                   params: ContactParams):
    """Equal-and-opposite R-frame wrenches for a given overlap.

    rel_velocity_at_contact is v2 - v1; the damper adds force while the bodies
    approach and bleeds it off during separation, clamped so the contact never
    pulls. Torques are zero for the central sphere proxy.
    """
    if depth < 0:
        raise ContractError(f"depth must be >= 0, got {depth}")
    normal = np.asarray(normal, dtype=float)
    approach = -float(np.dot(np.asarray(rel_velocity_at_contact, dtype=float), normal))
    magnitude = max(0.0, params.stiffness * depth + params.damping * approach)
    f2 = magnitude * normal
    w2 = Wrench(f2, np.zeros(3), Frame.R)
    w1 = Wrench(-f2, np.zeros(3), Frame.R)
    return w1, w2
