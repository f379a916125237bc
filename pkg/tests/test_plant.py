"""Servo, sensing, and safety-stop plant models."""

import numpy as np
import pytest

from orbemu.errors import ContractError
from orbemu.frames import Frame, Wrench
from orbemu.kinematics import forward_kinematics
from orbemu.plant import (SensorParams, ServoParams, check_safety, measure_wrench,
                          mockup_pose, sensor_rng, servo_step)
from tests.conftest import planar_2r


class TestServo:
    def test_at_command_unchanged(self):
        q = np.array([0.1, -0.2, 0.3, 0.0, 0.5, -0.5])
        np.testing.assert_array_equal(servo_step(q, q, ServoParams(), 1e-3), q)

    def test_first_order_step(self):
        p = ServoParams(time_constant=0.05)
        q1 = servo_step(np.zeros(6), np.full(6, 0.1), p, 1e-3)
        np.testing.assert_allclose(q1, np.full(6, 0.002), atol=1e-15)

    def test_rate_limit_binds(self):
        p = ServoParams(time_constant=0.05, qdot_max=np.full(6, 1.0))
        q1 = servo_step(np.zeros(6), np.full(6, 10.0), p, 1e-3)
        np.testing.assert_allclose(q1, np.full(6, 0.001), atol=1e-15)

    def test_travel_clamp(self):
        p = ServoParams(q_min=np.full(6, -0.5), q_max=np.full(6, 0.5))
        q1 = servo_step(np.full(6, 0.499), np.full(6, 5.0), p, 0.1)
        assert np.all(q1 <= p.q_max)

    def test_convergence_in_five_time_constants(self):
        p = ServoParams(time_constant=0.02, qdot_max=np.full(6, 1e9))
        q = np.zeros(6)
        q_cmd = np.array([0.4, -0.3, 0.2, 0.1, -0.1, 0.05])
        prev = np.linalg.norm(q - q_cmd)
        for _ in range(100):  # 5 tau at dt = 1 ms
            q = servo_step(q, q_cmd, p, 1e-3)
            cur = np.linalg.norm(q - q_cmd)
            assert cur <= prev + 1e-15
            prev = cur
        assert prev < 0.01 * np.linalg.norm(q_cmd)

    def test_params_validated(self):
        with pytest.raises(ContractError):
            ServoParams(time_constant=0.0)
        with pytest.raises(ContractError):
            ServoParams(qdot_max=np.array([1.0, -1.0]))
        with pytest.raises(ContractError):
            ServoParams(q_min=np.array([1.0]), q_max=np.array([-1.0]))
        with pytest.raises(ContractError):
            servo_step(np.zeros(6), np.zeros(6), ServoParams(), 0.0)


class TestSensor:
    def test_noiseless_passthrough(self):
        p = SensorParams(noise_sigma_force=0.0, noise_sigma_torque=0.0)
        w = Wrench(np.array([1.0, 2, 3]), np.array([0.1, 0.2, 0.3]), Frame.SENSOR)
        out = measure_wrench(w, p, sensor_rng(p.seed, 0, 0))
        np.testing.assert_array_equal(out.force, w.force)
        np.testing.assert_array_equal(out.torque, w.torque)

    def test_bias_added(self):
        bias = Wrench(np.array([0.5, 0, 0]), np.zeros(3), Frame.SENSOR)
        p = SensorParams(noise_sigma_force=0.0, noise_sigma_torque=0.0, bias=bias)
        out = measure_wrench(Wrench.zero(Frame.SENSOR), p, sensor_rng(p.seed, 0, 0))
        np.testing.assert_array_equal(out.force, bias.force)

    def test_noise_statistics(self):
        p = SensorParams(noise_sigma_force=0.1, noise_sigma_torque=0.005, seed=3)
        n = 100_000
        f = np.empty((n, 3))
        for tick in range(n):
            f[tick] = measure_wrench(Wrench.zero(Frame.SENSOR), p,
                                     sensor_rng(p.seed, 0, tick)).force
        assert np.all(np.abs(f.mean(axis=0)) < 3 * 0.1 / np.sqrt(n))
        np.testing.assert_allclose(f.std(axis=0), 0.1, rtol=0.05)

    def test_replay_determinism(self):
        p = SensorParams(seed=17)
        w = Wrench(np.ones(3), np.ones(3), Frame.SENSOR)
        a = [measure_wrench(w, p, sensor_rng(p.seed, 1, t)) for t in range(50)]
        b = [measure_wrench(w, p, sensor_rng(p.seed, 1, t)) for t in range(50)]
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x.force, y.force)
            np.testing.assert_array_equal(x.torque, y.torque)

    def test_streams_distinct_by_sensor_and_tick(self):
        a = sensor_rng(0, 0, 5).normal(size=3)
        b = sensor_rng(0, 1, 5).normal(size=3)
        c = sensor_rng(0, 0, 6).normal(size=3)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_params_validated(self):
        with pytest.raises(ContractError):
            SensorParams(noise_sigma_force=-0.1)
        with pytest.raises(Exception):
            SensorParams(bias=Wrench.zero(Frame.R))


class TestSafety:
    def test_mid_range_ok(self):
        assert check_safety(np.zeros(6), ServoParams()) is None

    def test_at_limit_reports_first_joint(self):
        p = ServoParams()
        q = np.zeros(6)
        q[3] = p.q_max[3]
        assert check_safety(q, p) == 3
        q[1] = p.q_min[1]
        assert check_safety(q, p) == 1

    def test_within_tolerance_of_limit(self):
        p = ServoParams(q_min=np.full(6, -1.0), q_max=np.full(6, 1.0))
        q = np.zeros(6)
        q[0] = 1.0 - 1e-12
        assert check_safety(q, p) == 0


class TestMockupPose:
    def test_delegates_to_forward_kinematics(self, rng):
        chain = planar_2r()
        for _ in range(5):
            q = rng.uniform(-np.pi, np.pi, 2)
            assert mockup_pose(chain, q).almost_equal(forward_kinematics(chain, q), tol=1e-15)
