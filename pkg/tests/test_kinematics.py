import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbemu import chains
from orbemu.errors import ContractError
from orbemu.kinematics import (ChainLink, Pose, SerialChain, forward_kinematics,
                               geometric_jacobian, joint_space_inertia)

from conftest import planar_2r


def fd_jacobian(chain, q, h=1e-7):
    """Central-difference Jacobian of the TCP pose (independent oracle)."""
    n = chain.dof
    J = np.zeros((6, n))
    for j in range(n):
        qp, qm = np.array(q, dtype=float), np.array(q, dtype=float)
        qp[j] += h
        qm[j] -= h
        pp, pm = forward_kinematics(chain, qp), forward_kinematics(chain, qm)
        J[:3, j] = (pp.position - pm.position) / (2 * h)
        # angular velocity from the relative rotation between the two poses
        dR = pp.rotation() @ pm.rotation().T
        w = 0.5 * np.array([dR[2, 1] - dR[1, 2], dR[0, 2] - dR[2, 0], dR[1, 0] - dR[0, 1]])
        J[3:, j] = w / (2 * h)
    return J


class TestForwardKinematics:
    def test_zero_angles(self, planar_chain):
        pose = forward_kinematics(planar_chain, [0.0, 0.0])
        np.testing.assert_allclose(pose.position, [2.0, 0.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(pose.orientation, [0, 0, 0, 1], atol=1e-12)

    def test_elbow_up(self, planar_chain):
        pose = forward_kinematics(planar_chain, [np.pi / 2, 0.0])
        np.testing.assert_allclose(pose.position, [0.0, 2.0, 0.0], atol=1e-12)
        # 90 degrees about z
        np.testing.assert_allclose(pose.orientation, [0, 0, np.sqrt(0.5), np.sqrt(0.5)],
                                   atol=1e-12)

    def test_elbow_bent(self, planar_chain):
        pose = forward_kinematics(planar_chain, [np.pi / 2, -np.pi / 2])
        np.testing.assert_allclose(pose.position, [1.0, 1.0, 0.0], atol=1e-12)

    def test_analytic_planar_sweep(self, planar_chain, rng):
        for _ in range(50):
            q1, q2 = rng.uniform(-np.pi, np.pi, 2)
            pose = forward_kinematics(planar_chain, [q1, q2])
            expected = [np.cos(q1) + np.cos(q1 + q2), np.sin(q1) + np.sin(q1 + q2), 0.0]
            np.testing.assert_allclose(pose.position, expected, atol=1e-12)

    def test_dimension_mismatch(self, planar_chain):
        with pytest.raises(ContractError):
            forward_kinematics(planar_chain, [0.0, 0.0, 0.0])

    def test_quaternion_normalized(self, rng):
        chain = chains.ur10e_like()
        for _ in range(20):
            q = rng.uniform(-np.pi, np.pi, 6)
            pose = forward_kinematics(chain, q)
            assert abs(np.linalg.norm(pose.orientation) - 1.0) < 1e-9

    def test_subchain_composition(self, rng):
        chain = chains.ur10e_like()
        q = rng.uniform(-np.pi, np.pi, 6)
        for split in (1, 3, 5):
            head = SerialChain(chain.links[:split], Pose.identity())
            tail = chain.subchain(split)
            combined = forward_kinematics(head, q[:split]).compose(
                forward_kinematics(tail, q[split:]))
            full = forward_kinematics(chain, q)
            assert combined.almost_equal(full, tol=1e-12)


class TestJacobian:
    def test_planar_columns(self, planar_chain):
        J = geometric_jacobian(planar_chain, [0.0, 0.0])
        np.testing.assert_allclose(J[:3, 0], [0, 2, 0], atol=1e-12)
        np.testing.assert_allclose(J[:3, 1], [0, 1, 0], atol=1e-12)
        np.testing.assert_allclose(J[3:, 0], [0, 0, 1], atol=1e-12)
        np.testing.assert_allclose(J[3:, 1], [0, 0, 1], atol=1e-12)

    def test_finite_difference(self, rng):
        chain = chains.ur10e_like()
        for _ in range(50):
            q = rng.uniform(-np.pi, np.pi, 6)
            J = geometric_jacobian(chain, q)
            assert np.max(np.abs(J - fd_jacobian(chain, q))) < 1e-6

    def test_singular_at_full_extension(self, planar_chain):
        J = geometric_jacobian(planar_chain, [0.0, 0.0])
        s = np.linalg.svd(J[:2, :], compute_uv=False)
        assert s.min() < 1e-12
        assert np.linalg.matrix_rank(J[:2, :], tol=1e-9) == 1

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(-np.pi, np.pi), min_size=6, max_size=6))
    def test_finite_difference_property(self, qlist):
        chain = chains.ur10e_like()
        q = np.array(qlist)
        J = geometric_jacobian(chain, q)
        assert np.max(np.abs(J - fd_jacobian(chain, q))) < 1e-6


class TestJointSpaceInertia:
    def test_point_mass_pendulum(self):
        chain = SerialChain(
            [ChainLink(Pose.identity(), np.array([0.0, 0.0, 1.0]),
                       mass=1.0, com=np.array([1.0, 0.0, 0.0]))],
            Pose(np.array([1.0, 0.0, 0.0])),
        )
        H = joint_space_inertia(chain, [0.3])
        np.testing.assert_allclose(H, [[1.0]], atol=1e-12)

    def test_planar_tip_mass(self):
        chain = planar_2r(m1=0.0, m2=1.0, com2=(1.0, 0.0, 0.0))
        H = joint_space_inertia(chain, [0.0, 0.0])
        np.testing.assert_allclose(H, [[4.0, 2.0], [2.0, 1.0]], atol=1e-12)

    def test_matches_mass_jacobian_oracle(self, rng):
        # H = sum_i m_i Jv_i^T Jv_i + Jw_i^T I_i Jw_i with per-link com Jacobians
        chain = chains.uniform_mass_chain(chains.ur10e_like())
        from orbemu.kinematics import chain_geometry
        for _ in range(10):
            q = rng.uniform(-np.pi, np.pi, 6)
            joint_origins, joint_axes, link_rot, link_org, _ = chain_geometry(chain, q)
            H_ref = np.zeros((6, 6))
            for i, link in enumerate(chain.links):
                c = link_org[i] + link_rot[i] @ link.com
                Jv = np.zeros((3, 6))
                Jw = np.zeros((3, 6))
                for j in range(i + 1):
                    Jv[:, j] = np.cross(joint_axes[j], c - joint_origins[j])
                    Jw[:, j] = joint_axes[j]
                Iw = link_rot[i] @ link.inertia @ link_rot[i].T
                H_ref += link.mass * Jv.T @ Jv + Jw.T @ Iw @ Jw
            H = joint_space_inertia(chain, q)
            np.testing.assert_allclose(H, H_ref, atol=1e-10)

    def test_symmetric_psd(self, rng):
        chain = chains.conditioned_chain(chains.ur10e_like(), 1.0, np.eye(3),
                                         0.01, 1e-6 * np.eye(3))
        for _ in range(50):
            q = rng.uniform(-np.pi, np.pi, 6)
            H = joint_space_inertia(chain, q)
            assert np.max(np.abs(H - H.T)) < 1e-12
            assert np.linalg.eigvalsh(H).min() >= -1e-12

    def test_periodicity(self, rng):
        chain = chains.uniform_mass_chain(chains.ur10e_like())
        q = rng.uniform(-np.pi, np.pi, 6)
        H1 = joint_space_inertia(chain, q)
        H2 = joint_space_inertia(chain, q + 2 * np.pi)
        np.testing.assert_allclose(H1, H2, atol=1e-12)


class TestChainSerialization:
    def test_round_trip(self, tmp_path):
        chain = chains.uniform_mass_chain(chains.ur10e_like())
        path = tmp_path / "chain.json"
        path.write_text(json.dumps(chain.to_dict()))
        loaded = SerialChain.from_json(path)
        q = np.array([0.3, -0.7, 1.1, 0.2, -0.4, 0.9])
        assert forward_kinematics(loaded, q).almost_equal(forward_kinematics(chain, q), 1e-12)
        np.testing.assert_allclose(joint_space_inertia(loaded, q),
                                   joint_space_inertia(chain, q), atol=1e-15)

    def test_invalid_axis_rejected(self):
        with pytest.raises(ContractError):
            ChainLink(Pose.identity(), np.array([0.0, 0.0, 2.0]))
