"""Bundled manipulator chain definitions.

The 6R chain below uses nominal published-catalog link lengths for a
UR10e-class arm. It is a stand-in, not a calibrated robot model, and every
scenario can swap in its own chain via the JSON chain format.
"""

import numpy as np

from . import quat
from .kinematics import ChainLink, Pose, SerialChain

# classic DH rows (d, a, alpha) per joint, meters / radians
_UR10E_DH = [
    (0.1807, 0.0, np.pi / 2),
    (0.0, -0.6127, 0.0),
    (0.0, -0.57155, 0.0),
    (0.17415, 0.0, np.pi / 2),
    (0.11985, 0.0, -np.pi / 2),
    (0.11655, 0.0, 0.0),
]

# elbow-up posture away from workspace boundaries; used to anchor default scenarios
UR10E_HOME = np.array([0.0, -np.pi / 2, np.pi / 2, -np.pi / 2, -np.pi / 2, 0.0])


def _dh_fixed(d, a, alpha):
    # Trans_z(d) * Trans_x(a) * Rot_x(alpha) as a Pose
    return Pose(np.array([a, 0.0, d]), quat.from_axis_angle((1.0, 0.0, 0.0), alpha))


def ur10e_like() -> SerialChain:
    """Nominal 6R chain with UR10e-class link lengths; link masses left at zero."""
    z = np.array([0.0, 0.0, 1.0])
    links = [ChainLink(Pose.identity(), z)]
    for d, a, alpha in _UR10E_DH[:-1]:
        links.append(ChainLink(_dh_fixed(d, a, alpha), z))
    d6, a6, alpha6 = _UR10E_DH[-1]
    return SerialChain(links, _dh_fixed(d6, a6, alpha6))


def conditioned_chain(chain: SerialChain, m_e, I_e, m_l, I_l) -> SerialChain:
    """Virtual-model mass placement: tip link carries m_e/I_e with com at the TCP,
    every other link carries m_l/I_l at its joint origin."""
    n = chain.dof
    masses = [m_l] * (n - 1) + [m_e]
    coms = [np.zeros(3)] * (n - 1) + [chain.tcp_offset.position.copy()]
    I_l = np.asarray(I_l, dtype=float)
    I_e = np.asarray(I_e, dtype=float)
    inertias = [I_l] * (n - 1) + [I_e]
    return chain.with_masses(masses, coms, inertias)


def uniform_mass_chain(chain: SerialChain, link_mass=6.0) -> SerialChain:
    """Same kinematics with realistic uniform link masses, com mid-link."""
    n = chain.dof
    masses = [link_mass] * n
    coms = []
    for i in range(n):
        nxt = chain.links[i + 1].parent_transform.position if i + 1 < n else chain.tcp_offset.position
        coms.append(0.5 * nxt)
    inertias = [0.1 * np.eye(3)] * n
    return chain.with_masses(masses, coms, inertias)
