"""Frame transformation block: pose/twist round trips and wrench re-expression."""

import numpy as np
import pytest

from orbemu import quat
from orbemu.errors import FrameMismatch
from orbemu.frames import (Frame, FrameMapping, Wrench, sat_to_tcp, sat_to_tcp_twist,
                           tcp_to_sat, wrench_R_to_sensor, wrench_sensor_to_R)
from orbemu.kinematics import Pose
from orbemu.ods import SatelliteState


def random_state(rng):
    return SatelliteState(rng.normal(size=3), 0.1 * rng.normal(size=3),
                          quat.normalize(rng.normal(size=4)), rng.normal(size=3))


def random_mapping(rng):
    return FrameMapping(
        lab_from_R=Pose(rng.normal(size=3), quat.normalize(rng.normal(size=4))),
        position_scale=float(rng.uniform(0.5, 3.0)),
    )


class TestWrenchType:
    def test_frame_tag_required_on_add(self):
        a = Wrench(np.ones(3), np.zeros(3), Frame.R)
        b = Wrench(np.ones(3), np.zeros(3), Frame.LAB)
        with pytest.raises(FrameMismatch):
            a + b
        c = a + Wrench(np.ones(3), np.ones(3), Frame.R)
        np.testing.assert_array_equal(c.force, 2 * np.ones(3))
        assert c.frame is Frame.R

    def test_require_frame(self):
        w = Wrench.zero(Frame.SENSOR)
        assert w.require_frame(Frame.SENSOR) is w
        with pytest.raises(FrameMismatch):
            w.require_frame(Frame.R)

    def test_mapping_validation(self):
        with pytest.raises(FrameMismatch):
            FrameMapping(position_scale=0.0)
        with pytest.raises(FrameMismatch):
            FrameMapping(torque_scale=0.5)


class TestPoseMapping:
    def test_identity_mapping_passthrough(self):
        s = SatelliteState(rho=[0.3, -0.2, 0.1], eps=quat.from_axis_angle(np.array([0, 0, 1.0]), 0.4))
        pose = sat_to_tcp(s, FrameMapping())
        np.testing.assert_allclose(pose.position, s.rho, atol=1e-15)
        np.testing.assert_allclose(pose.orientation, s.eps, atol=1e-15)

    def test_translated_mapping(self):
        m = FrameMapping(lab_from_R=Pose(np.array([1.0, 2.0, 0.0])))
        pose = sat_to_tcp(SatelliteState(rho=[0.1, 0, 0]), m)
        np.testing.assert_allclose(pose.position, [1.1, 2.0, 0.0], atol=1e-15)

    def test_round_trip(self, rng):
        for _ in range(20):
            m = random_mapping(rng)
            s = random_state(rng)
            pose = sat_to_tcp(s, m)
            twist = sat_to_tcp_twist(s, m)
            rho, rho_dot, eps, omega_body = tcp_to_sat(pose, twist, m)
            np.testing.assert_allclose(rho, s.rho, atol=1e-12)
            np.testing.assert_allclose(rho_dot, s.rho_dot, atol=1e-12)
            # quaternion double cover
            assert min(np.linalg.norm(eps - s.eps), np.linalg.norm(eps + s.eps)) < 1e-12
            np.testing.assert_allclose(omega_body, s.omega_body, atol=1e-12)

    def test_position_scale_arithmetic(self):
        m = FrameMapping(position_scale=2.0)
        pose = Pose(np.array([0.05, 0.0, 0.0]))
        rho, rho_dot, _, _ = tcp_to_sat(pose, np.zeros(6), m)
        np.testing.assert_allclose(rho, [0.1, 0, 0], atol=1e-15)
        np.testing.assert_array_equal(rho_dot, np.zeros(3))


class TestWrenchMapping:
    def test_torque_scale_fixture(self):
        w = Wrench(np.zeros(3), np.array([2000.0, 0, 0]), Frame.SENSOR)
        out = wrench_sensor_to_R(w, Pose.identity(), FrameMapping())
        np.testing.assert_allclose(out.torque, [1.0, 0, 0], atol=1e-15)
        assert out.frame is Frame.R

    def test_zero_passthrough(self):
        out = wrench_sensor_to_R(Wrench.zero(Frame.SENSOR), Pose.identity(), FrameMapping())
        np.testing.assert_array_equal(out.force, np.zeros(3))
        np.testing.assert_array_equal(out.torque, np.zeros(3))

    def test_rotated_tcp(self):
        tcp = Pose(np.zeros(3), quat.from_axis_angle(np.array([0, 0, 1.0]), np.pi / 2))
        w = Wrench(np.array([1.0, 0, 0]), np.zeros(3), Frame.SENSOR)
        out = wrench_sensor_to_R(w, tcp, FrameMapping())
        np.testing.assert_allclose(out.force, [0, 1.0, 0], atol=1e-12)

    def test_norm_preservation(self, rng):
        for _ in range(20):
            m = random_mapping(rng)
            tcp = Pose(rng.normal(size=3), quat.normalize(rng.normal(size=4)))
            w = Wrench(rng.normal(size=3), rng.normal(size=3), Frame.SENSOR)
            out = wrench_sensor_to_R(w, tcp, m)
            assert np.linalg.norm(out.force) == pytest.approx(np.linalg.norm(w.force), rel=1e-12)
            assert np.linalg.norm(out.torque) == pytest.approx(
                np.linalg.norm(w.torque) / m.torque_scale, rel=1e-12)

    def test_inverse_without_scaling(self, rng):
        # with torque_scale 1 the two directions are exact inverses
        for _ in range(10):
            m = random_mapping(rng)
            m.torque_scale = 1.0
            tcp = Pose(rng.normal(size=3), quat.normalize(rng.normal(size=4)))
            w = Wrench(rng.normal(size=3), rng.normal(size=3), Frame.R)
            back = wrench_sensor_to_R(wrench_R_to_sensor(w, tcp, m), tcp, m)
            np.testing.assert_allclose(back.force, w.force, atol=1e-12)
            np.testing.assert_allclose(back.torque, w.torque, atol=1e-12)

    def test_sensor_offset_moment_shift(self):
        # a force applied at a sensor displaced from the TCP adds a lever-arm torque
        m = FrameMapping(sensor_from_tcp=Pose(np.array([0.0, 0.0, 0.1])))
        w = Wrench(np.array([1.0, 0, 0]), np.zeros(3), Frame.SENSOR)
        out = wrench_sensor_to_R(w, Pose.identity(), m)
        np.testing.assert_allclose(out.torque * m.torque_scale, [0.0, 0.1, 0.0], atol=1e-15)

    def test_frame_tags_enforced(self):
        with pytest.raises(FrameMismatch):
            wrench_sensor_to_R(Wrench.zero(Frame.R), Pose.identity(), FrameMapping())
        with pytest.raises(FrameMismatch):
            wrench_R_to_sensor(Wrench.zero(Frame.SENSOR), Pose.identity(), FrameMapping())
