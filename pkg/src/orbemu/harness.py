"""Scenario runner: the closed loop from mockup contact through sensing, frame
transformation, orbital propagation, waypoint generation, Cartesian control,
and the simulated robot servos — with CSV logging and summary metrics.

Per tick the stages run in a fixed, documented order:
  (1) true wrenches at the currently executed mockup poses (contact + scripted
      or live pulses), (2) F/T sensing with noise, (3) re-expression in the R
  frame with torque scaling, (4) one orbital-dynamics step per satellite under
  the measured wrench, (5) waypoint sampling at the waypoint rate (zero-order
  hold in between), (6) one controller cycle per robot toward the current
  waypoint, (7) servo step, (8) safety check (a robot at a joint limit freezes
  for the rest of the run), (9) log record.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import quat
from .config import COLLISION, ForcePulse, ScenarioConfig, SatelliteSetup
from .contact import detect
from .errors import ConfigError, SolverError
from .frames import Frame, Wrench, sat_to_tcp, tcp_to_sat, wrench_R_to_sensor, \
    wrench_sensor_to_R
from .kinematics import Pose, fast_fk
from .ods import SatelliteState, _rk4_n
from .plant import check_safety, measure_wrench, sensor_rng, servo_step
from .vfdm import vfdm_cycle, virtual_chain

PARAM_WHITELIST = ("vfdm.kp_trans", "vfdm.kd_trans", "vfdm.kp_rot", "vfdm.kd_rot")

# per-satellite log block: desired/actual pose, desired/actual velocity,
# measured wrench, joints, safety flag
_SAT_FIELDS = (["des_px", "des_py", "des_pz", "des_qx", "des_qy", "des_qz", "des_qw",
                "act_px", "act_py", "act_pz", "act_qx", "act_qy", "act_qz", "act_qw",
                "des_vx", "des_vy", "des_vz", "act_vx", "act_vy", "act_vz",
                "fx", "fy", "fz", "tx", "ty", "tz"]
               + [f"q{j}" for j in range(1, 7)] + ["safety"])
SAT_BLOCK = len(_SAT_FIELDS)


def log_columns(n_sats: int) -> list[str]:
    cols = ["tick", "t"]
    for i in range(1, n_sats + 1):
        cols += [f"s{i}_{name}" for name in _SAT_FIELDS]
    return cols + ["contact_depth"]


class _SatRuntime:
    """Mutable per-satellite loop state."""

    def __init__(self, setup: SatelliteSetup, cfg: ScenarioConfig, index: int):
        self.setup = setup
        self.index = index
        self.svec = setup.state.as_vector().copy()
        self.q = setup.home_q.copy()
        self.q_cmd = setup.home_q.copy()
        self.vchain = virtual_chain(setup.chain, cfg.vfdm)
        self.target = sat_to_tcp(setup.state, setup.mapping)
        self.frozen = False
        # seeded so the first finite difference reproduces the initial velocity
        self.prev_rho_exec = setup.state.rho - setup.state.rho_dot * cfg.dt_sim


@dataclass
class RunResult:
    columns: list[str]
    rows: np.ndarray
    sat_names: list[str]
    status: str
    metrics: dict = field(default_factory=dict)


class Simulation:
    """Owns all loop state; stepped one tick at a time.

    Live commands are queued via queue_command and applied at the next tick
    boundary, so a run with an empty queue is bit-reproducible from the config
    alone and any live impulse has an exactly equivalent scripted pulse.
    """

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.vfdm = config.vfdm
        self.reset()

    def reset(self):
        cfg = self.config
        self.vfdm = cfg.vfdm
        self.sats = [_SatRuntime(s, cfg, i) for i, s in enumerate(cfg.satellites)]
        self.names = [s.name for s in cfg.satellites]
        self.tick = 0
        self.paused = False
        self.pulses: list[ForcePulse] = list(cfg.force_script)
        self.rows: list[np.ndarray] = []
        self._queue: list[dict] = []
        self._stride = max(1, int(round(1.0 / (cfg.waypoint_rate * cfg.dt_sim))))

    @property
    def n_ticks(self) -> int:
        return int(round(self.config.duration / self.config.dt_sim))

    @property
    def done(self) -> bool:
        return self.tick >= self.n_ticks

    @property
    def status(self) -> str:
        if any(s.frozen for s in self.sats):
            return "safety_stop"
        return "paused" if self.paused else "running"

    def queue_command(self, cmd: dict):
        """Validate now, apply at the next tick boundary. Malformed input raises."""
        if not isinstance(cmd, dict) or "type" not in cmd:
            raise ConfigError("command must be an object with a 'type' field")
        kind = cmd["type"]
        if kind == "impulse":
            if cmd.get("sat") not in self.names:
                raise ConfigError(f"impulse names unknown satellite {cmd.get('sat')!r}")
            if not (float(cmd.get("duration_s", 0)) > 0):
                raise ConfigError("impulse duration_s must be > 0")
            np.asarray(cmd.get("force", [0, 0, 0]), dtype=float).reshape(3)
            np.asarray(cmd.get("torque", [0, 0, 0]), dtype=float).reshape(3)
        elif kind == "cmd":
            if cmd.get("action") not in ("pause", "resume", "reset"):
                raise ConfigError(f"unknown action {cmd.get('action')!r}")
        elif kind == "set_param":
            if cmd.get("path") not in PARAM_WHITELIST:
                raise ConfigError(f"parameter path {cmd.get('path')!r} not writable; "
                                  f"allowed: {PARAM_WHITELIST}")
            if float(cmd.get("value", -1)) < 0:
                raise ConfigError("parameter value must be >= 0")
        else:
            raise ConfigError(f"unknown command type {kind!r}")
        self._queue.append(cmd)

    def _apply_queued(self):
        queue, self._queue = self._queue, []
        for cmd in queue:
            if cmd["type"] == "impulse":
                self.pulses.append(ForcePulse(
                    sat=cmd["sat"], t_start=self.tick * self.config.dt_sim,
                    duration=float(cmd["duration_s"]),
                    force=cmd.get("force", np.zeros(3)),
                    torque=cmd.get("torque", np.zeros(3))))
            elif cmd["type"] == "cmd":
                if cmd["action"] == "pause":
                    self.paused = True
                elif cmd["action"] == "resume":
                    self.paused = False
                else:
                    self.reset()
            else:
                setattr(self.vfdm, cmd["path"].split(".", 1)[1], float(cmd["value"]))

    def step(self):
        """One tick; returns the appended log row, or None while paused/done."""
        self._apply_queued()
        if self.paused or self.done:
            return None
        cfg = self.config
        dt = cfg.dt_sim
        t = self.tick * dt
        n = cfg.orbit.omega

        # (1) executed poses in R and the true wrenches acting on each mockup
        tcp_poses, exec_rho, exec_eps, exec_v = [], [], [], []
        for sat in self.sats:
            tcp = fast_fk(sat.setup.chain, sat.q)
            rho, _, eps, _ = tcp_to_sat(tcp, np.zeros(6), sat.setup.mapping)
            tcp_poses.append(tcp)
            exec_rho.append(rho)
            exec_eps.append(eps)
            exec_v.append((rho - sat.prev_rho_exec) / dt)
            sat.prev_rho_exec = rho

        true_wrenches = [Wrench.zero(Frame.R) for _ in self.sats]
        depth = 0.0
        if cfg.scenario == COLLISION:
            c = detect(Pose(exec_rho[0], exec_eps[0]), self.sats[0].setup.body.collision_radius,
                       Pose(exec_rho[1], exec_eps[1]), self.sats[1].setup.body.collision_radius)
            if c is not None:
                depth = c.depth
                from .contact import contact_wrench
                w1, w2 = contact_wrench(c.depth, c.normal, exec_v[1] - exec_v[0], cfg.contact)
                true_wrenches[0] = true_wrenches[0] + w1
                true_wrenches[1] = true_wrenches[1] + w2
        for pulse in self.pulses:
            if pulse.active(t):
                i = self.names.index(pulse.sat)
                true_wrenches[i] = true_wrenches[i] + Wrench(pulse.force, pulse.torque, Frame.R)

        row = np.empty(2 + SAT_BLOCK * len(self.sats) + 1)
        row[0], row[1] = self.tick, t
        for i, sat in enumerate(self.sats):
            setup = sat.setup
            # (2)-(3) sense at the mockup, re-express in R (torque scaled)
            w_sensor = wrench_R_to_sensor(true_wrenches[i], tcp_poses[i], setup.mapping)
            measured = measure_wrench(w_sensor, setup.sensor,
                                      sensor_rng(setup.sensor.seed, i, self.tick))
            w_meas = wrench_sensor_to_R(measured, tcp_poses[i], setup.mapping)

            # (4) orbital/attitude step under the measured wrench (zero-order hold)
            I1, I2, I3 = setup.body.inertia_principal
            sat.svec = _rk4_n(sat.svec, w_meas.force, w_meas.torque, setup.body.mass,
                              I1, I2, I3, n, dt, 1, False)
            if not np.all(np.isfinite(sat.svec)):
                raise SolverError(f"non-finite satellite state for {setup.name} "
                                  f"at tick {self.tick}")

            # (5) waypoint sampling, zero-order held between samples
            if self.tick % self._stride == 0:
                sat.target = sat_to_tcp(SatelliteState.from_vector(sat.svec), setup.mapping)

            # (6)-(8) controller cycle, servo, safety
            if not sat.frozen:
                sat.q_cmd, _ = vfdm_cycle(sat.vchain, sat.q_cmd, sat.target, self.vfdm)
                sat.q = servo_step(sat.q, sat.q_cmd, setup.servo, dt)
            safety = check_safety(sat.q, setup.servo)
            if safety is not None:
                sat.frozen = True

            # (9) record
            o = 2 + SAT_BLOCK * i
            row[o:o + 3] = sat.svec[0:3]
            row[o + 3:o + 7] = sat.svec[6:10]
            row[o + 7:o + 10] = exec_rho[i]
            row[o + 10:o + 14] = exec_eps[i]
            row[o + 14:o + 17] = sat.svec[3:6]
            row[o + 17:o + 20] = exec_v[i]
            row[o + 20:o + 23] = w_meas.force
            row[o + 23:o + 26] = w_meas.torque
            row[o + 26:o + 32] = sat.q
            row[o + 32] = 0.0 if safety is None else 1.0
        row[-1] = depth
        self.rows.append(row)
        self.tick += 1
        return row

    def result(self) -> RunResult:
        rows = np.array(self.rows) if self.rows else np.empty((0, len(log_columns(len(self.sats)))))
        res = RunResult(log_columns(len(self.sats)), rows, list(self.names), self.status)
        if len(self.rows):
            res.metrics = compute_metrics(rows, res.columns, self.config.orbit.omega,
                                          self.names)
        return res


def run_scenario(config: ScenarioConfig, commands=None) -> RunResult:
    """Run a scenario headless to completion.

    commands, when given, maps tick -> list of command dicts injected at that
    tick boundary (the live-input path, made scriptable for tests).
    """
    sim = Simulation(config)
    while not sim.done:
        for cmd in (commands or {}).get(sim.tick, []):
            sim.queue_command(cmd)
        sim.step()
    return sim.result()


def write_log(result: RunResult, path):
    """CSV with the fixed column order and full float precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(result.columns)
        for row in result.rows:
            writer.writerow([int(row[0])] + [repr(float(v)) for v in row[1:]])


def read_log(path):
    """(columns, rows) round-tripping write_log bit-exactly."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        rows = np.array([[float(v) for v in line] for line in reader])
    if rows.size == 0:
        rows = rows.reshape(0, len(columns))
    return columns, rows


def compute_metrics(rows: np.ndarray, columns: list[str], omega: float,
                    sat_names=None) -> dict:
    """Per-satellite tracking/force summaries plus cross-satellite residuals."""
    if len(rows) == 0:
        raise ConfigError("metrics require a non-empty log")
    col = {name: k for k, name in enumerate(columns)}
    n_sats = (len(columns) - 3) // SAT_BLOCK
    names = sat_names or [f"s{i}" for i in range(1, n_sats + 1)]
    out = {"satellites": {}}

    def block(i, fieldname, width=3):
        k = col[f"s{i}_{fieldname}"]
        return rows[:, k:k + width]

    for i in range(1, n_sats + 1):
        pos_err = np.linalg.norm(block(i, "act_px") - block(i, "des_px"), axis=1)
        vel_err = np.linalg.norm(block(i, "act_vx") - block(i, "des_vx"), axis=1)
        force = np.linalg.norm(block(i, "fx"), axis=1)
        torque = np.linalg.norm(block(i, "tx"), axis=1)
        speed = np.linalg.norm(block(i, "des_vx"), axis=1)
        # conservation residual of the along-track first integral over the
        # force-free tail/head spans (quiet ticks only)
        quiet = force < max(1e-9, 3 * np.median(force))
        integral = block(i, "des_vx")[:, 1] + 2 * omega * block(i, "des_px")[:, 0]
        # worst drift within any contiguous force-free span (levels differ
        # across force episodes by design)
        drift = 0.0
        edges = np.flatnonzero(np.diff(np.concatenate(([0], quiet.astype(int), [0]))))
        for a, b in edges.reshape(-1, 2):
            drift = max(drift, float(np.ptp(integral[a:b])))
        corr = 0.0
        if np.std(speed) > 1e-12 and np.std(pos_err) > 1e-12:
            corr = float(np.corrcoef(speed, pos_err)[0, 1])
        out["satellites"][names[i - 1]] = {
            "max_pos_err": float(pos_err.max()),
            "mean_pos_err": float(pos_err.mean()),
            "max_vel_err": float(vel_err.max()),
            "mean_vel_err": float(vel_err.mean()),
            "peak_force": float(force.max()),
            "peak_torque": float(torque.max()),
            "cw_integral_drift": drift,
            "speed_error_correlation": corr,
        }

    depth = rows[:, col["contact_depth"]]
    contact = depth > 0
    out["contact_ticks"] = int(contact.sum())
    out["contact_episodes"] = int(np.sum(np.diff(contact.astype(int)) == 1)
                                  + (1 if contact.size and contact[0] else 0))
    if n_sats == 2 and contact.any():
        fsum = block(1, "fx")[contact] + block(2, "fx")[contact]
        out["force_symmetry_residual"] = float(np.linalg.norm(fsum, axis=1).max())
    return out
