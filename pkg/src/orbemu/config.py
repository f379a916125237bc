"""Scenario configuration: JSON loading, defaulting, and exhaustive validation.

A scenario document describes the orbit, the satellites (body, initial state,
robot chain, frame mapping, servo and sensor models), the controller tuning,
the contact model, and any scripted force pulses. Unknown keys are rejected so
typos fail loudly, and every invariant violation is reported in one pass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import chains, quat
from .contact import ContactParams
from .errors import ConfigError
from .frames import Frame, FrameMapping, Wrench
from .kinematics import Pose, SerialChain, forward_kinematics
from .ods import OrbitParams, SatelliteBody, SatelliteState
from .plant import SensorParams, ServoParams
from .vfdm import VfdmParams

FREE_FLOAT = "FREE_FLOAT"
COLLISION = "COLLISION"


@dataclass
class ForcePulse:
    """Scripted external wrench on one satellite over [t_start, t_start + duration)."""

    sat: str
    t_start: float
    duration: float
    force: np.ndarray = field(default_factory=lambda: np.zeros(3))
    torque: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.force = np.asarray(self.force, dtype=float).reshape(3)
        self.torque = np.asarray(self.torque, dtype=float).reshape(3)

    def active(self, t: float) -> bool:
        return self.t_start - 1e-12 <= t < self.t_start + self.duration - 1e-12

    def to_dict(self) -> dict:
        return {"sat": self.sat, "t_start": self.t_start, "duration": self.duration,
                "force": self.force.tolist(), "torque": self.torque.tolist()}


@dataclass
class SatelliteSetup:
    """One satellite: mockup body, initial orbital state, and its robot."""

    name: str
    body: SatelliteBody
    state: SatelliteState
    chain: SerialChain
    home_q: np.ndarray
    mapping: FrameMapping
    servo: ServoParams
    sensor: SensorParams

    def __post_init__(self):
        self.home_q = np.asarray(self.home_q, dtype=float)


@dataclass
class ScenarioConfig:
    scenario: str
    duration: float
    satellites: list[SatelliteSetup]
    dt_sim: float = 1e-3
    waypoint_rate: float = 100.0
    orbit: OrbitParams = field(default_factory=OrbitParams)
    vfdm: VfdmParams = field(default_factory=VfdmParams)
    contact: ContactParams = field(default_factory=ContactParams)
    force_script: list[ForcePulse] = field(default_factory=list)
    seed: int = 0

    def __post_init__(self):
        problems = validate(self)
        if problems:
            raise ConfigError("; ".join(problems))


def validate(cfg: ScenarioConfig) -> list[str]:
    """Every violated invariant, in one pass."""
    problems = []
    if cfg.scenario not in (FREE_FLOAT, COLLISION):
        problems.append(f"scenario must be {FREE_FLOAT} or {COLLISION}, got {cfg.scenario!r}")
    if cfg.duration <= 0:
        problems.append(f"duration must be > 0, got {cfg.duration}")
    if cfg.dt_sim <= 0:
        problems.append(f"dt_sim must be > 0, got {cfg.dt_sim}")
    elif cfg.waypoint_rate * cfg.dt_sim > 1 + 1e-12:
        problems.append("waypoint_rate * dt_sim must be <= 1 "
                        f"(got {cfg.waypoint_rate} * {cfg.dt_sim})")
    if cfg.waypoint_rate <= 0:
        problems.append(f"waypoint_rate must be > 0, got {cfg.waypoint_rate}")
    expected = {FREE_FLOAT: 1, COLLISION: 2}.get(cfg.scenario)
    if expected is not None and len(cfg.satellites) != expected:
        problems.append(f"{cfg.scenario} requires exactly {expected} satellite(s), "
                        f"got {len(cfg.satellites)}")
    names = [s.name for s in cfg.satellites]
    if len(set(names)) != len(names):
        problems.append(f"satellite names must be unique, got {names}")
    for pulse in cfg.force_script:
        if pulse.sat not in names:
            problems.append(f"force_script names unknown satellite {pulse.sat!r}")
        if pulse.duration <= 0:
            problems.append(f"force_script pulse duration must be > 0, got {pulse.duration}")
    for sat in cfg.satellites:
        if len(sat.home_q) != sat.chain.dof:
            problems.append(f"{sat.name}: home_q length {len(sat.home_q)} != "
                            f"chain dof {sat.chain.dof}")
    return problems


def auto_mapping(chain: SerialChain, home_q, state: SatelliteState,
                 position_scale=1.0, torque_scale=2000.0,
                 sensor_from_tcp: Pose | None = None) -> FrameMapping:
    """Place the R frame so the robot's home TCP realizes the initial state."""
    tcp = forward_kinematics(chain, home_q)
    lab_q = quat.normalize(quat.mul(tcp.orientation, quat.conj(state.eps)))
    lab_p = tcp.position - quat.to_matrix(lab_q) @ (state.rho / position_scale)
    return FrameMapping(Pose(lab_p, lab_q), position_scale, torque_scale,
                        sensor_from_tcp or Pose.identity())


def _check_keys(doc: dict, allowed, where: str):
    unknown = set(doc) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}; "
                          f"allowed: {sorted(allowed)}")


def _pose_from(doc: dict, where: str) -> Pose:
    _check_keys(doc, {"position", "orientation"}, where)
    return Pose.from_dict(doc)


def _satellite_from(doc: dict, index: int, default_seed: int) -> SatelliteSetup:
    where = f"satellites[{index}]"
    _check_keys(doc, {"name", "body", "state", "chain", "home_q", "mapping",
                      "servo", "sensor"}, where)
    name = doc.get("name", f"sat{index + 1}")

    body_doc = dict(doc.get("body", {}))
    _check_keys(body_doc, {"mass", "inertia_principal", "collision_radius"}, f"{where}.body")
    body = SatelliteBody(name=name, **body_doc)

    state_doc = dict(doc.get("state", {}))
    _check_keys(state_doc, {"rho", "rho_dot", "eps", "omega_body"}, f"{where}.state")
    state = SatelliteState(**state_doc)

    chain_doc = doc.get("chain", "ur10e")
    if chain_doc == "ur10e":
        chain = chains.ur10e_like()
        home_q = np.asarray(doc.get("home_q", chains.UR10E_HOME), dtype=float)
    elif isinstance(chain_doc, dict):
        chain = SerialChain.from_dict(chain_doc)
        home_q = np.asarray(doc.get("home_q", np.zeros(chain.dof)), dtype=float)
    else:
        raise ConfigError(f"{where}.chain must be 'ur10e' or an inline chain document")

    servo_doc = dict(doc.get("servo", {}))
    _check_keys(servo_doc, {"time_constant", "qdot_max", "q_min", "q_max"}, f"{where}.servo")
    servo = ServoParams(**servo_doc)

    sensor_doc = dict(doc.get("sensor", {}))
    _check_keys(sensor_doc, {"noise_sigma_force", "noise_sigma_torque", "bias", "seed"},
                f"{where}.sensor")
    if "bias" in sensor_doc:
        b = sensor_doc["bias"]
        sensor_doc["bias"] = Wrench(b.get("force", [0, 0, 0]), b.get("torque", [0, 0, 0]),
                                    Frame.SENSOR)
    sensor_doc.setdefault("seed", default_seed)
    sensor = SensorParams(**sensor_doc)

    map_doc = dict(doc.get("mapping", {}))
    _check_keys(map_doc, {"lab_from_R", "position_scale", "torque_scale", "sensor_from_tcp"},
                f"{where}.mapping")
    scale = float(map_doc.get("position_scale", 1.0))
    tscale = float(map_doc.get("torque_scale", 2000.0))
    sensor_from_tcp = (_pose_from(map_doc["sensor_from_tcp"], f"{where}.mapping.sensor_from_tcp")
                       if "sensor_from_tcp" in map_doc else Pose.identity())
    lab_doc = map_doc.get("lab_from_R", "auto")
    if lab_doc == "auto":
        mapping = auto_mapping(chain, home_q, state, scale, tscale, sensor_from_tcp)
    else:
        mapping = FrameMapping(_pose_from(lab_doc, f"{where}.mapping.lab_from_R"),
                               scale, tscale, sensor_from_tcp)

    return SatelliteSetup(name, body, state, chain, home_q, mapping, servo, sensor)


_TOP_KEYS = {"scenario", "duration", "dt_sim", "waypoint_rate", "seed", "orbit",
             "satellites", "vfdm", "contact", "force_script"}
_VFDM_KEYS = {"kp_trans", "kd_trans", "kp_rot", "kd_rot", "m_e", "m_l", "I_e", "I_l",
              "dt_ctrl", "max_iters", "tol_pos", "tol_rot", "regularization"}


def config_from_dict(doc: dict) -> ScenarioConfig:
    _check_keys(doc, _TOP_KEYS, "scenario document")
    for key in ("scenario", "duration", "satellites"):
        if key not in doc:
            raise ConfigError(f"missing required key {key!r}")

    orbit_doc = dict(doc.get("orbit", {}))
    _check_keys(orbit_doc, {"mu", "a"}, "orbit")
    vfdm_doc = dict(doc.get("vfdm", {}))
    _check_keys(vfdm_doc, _VFDM_KEYS, "vfdm")
    contact_doc = dict(doc.get("contact", {}))
    _check_keys(contact_doc, {"stiffness", "damping"}, "contact")

    seed = int(doc.get("seed", 0))
    sats = [_satellite_from(d, i, seed) for i, d in enumerate(doc["satellites"])]
    pulses = []
    for i, p in enumerate(doc.get("force_script", [])):
        _check_keys(p, {"sat", "t_start", "duration", "force", "torque"},
                    f"force_script[{i}]")
        pulses.append(ForcePulse(**p))

    return ScenarioConfig(
        scenario=doc["scenario"],
        duration=float(doc["duration"]),
        dt_sim=float(doc.get("dt_sim", 1e-3)),
        waypoint_rate=float(doc.get("waypoint_rate", 100.0)),
        orbit=OrbitParams(**orbit_doc),
        satellites=sats,
        vfdm=VfdmParams(**vfdm_doc),
        contact=ContactParams(**contact_doc),
        force_script=pulses,
        seed=seed,
    )


def load_config(path) -> ScenarioConfig:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise ConfigError(f"{path}: invalid JSON at line {err.lineno}, "
                              f"column {err.colno}: {err.msg}") from err
    return config_from_dict(doc)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    def sat_doc(s: SatelliteSetup) -> dict:
        return {
            "name": s.name,
            "body": {"mass": s.body.mass,
                     "inertia_principal": s.body.inertia_principal.tolist(),
                     "collision_radius": s.body.collision_radius},
            "state": {"rho": s.state.rho.tolist(), "rho_dot": s.state.rho_dot.tolist(),
                      "eps": s.state.eps.tolist(),
                      "omega_body": s.state.omega_body.tolist()},
            "chain": "ur10e",
            "home_q": s.home_q.tolist(),
            "mapping": {"lab_from_R": s.mapping.lab_from_R.to_dict(),
                        "position_scale": s.mapping.position_scale,
                        "torque_scale": s.mapping.torque_scale,
                        "sensor_from_tcp": s.mapping.sensor_from_tcp.to_dict()},
            "servo": {"time_constant": s.servo.time_constant,
                      "qdot_max": s.servo.qdot_max.tolist(),
                      "q_min": s.servo.q_min.tolist(),
                      "q_max": s.servo.q_max.tolist()},
            "sensor": {"noise_sigma_force": s.sensor.noise_sigma_force,
                       "noise_sigma_torque": s.sensor.noise_sigma_torque,
                       "seed": s.sensor.seed},
        }

    return {
        "scenario": cfg.scenario,
        "duration": cfg.duration,
        "dt_sim": cfg.dt_sim,
        "waypoint_rate": cfg.waypoint_rate,
        "seed": cfg.seed,
        "orbit": {"mu": cfg.orbit.mu, "a": cfg.orbit.a},
        "vfdm": {"kp_trans": cfg.vfdm.kp_trans, "kd_trans": cfg.vfdm.kd_trans,
                 "kp_rot": cfg.vfdm.kp_rot, "kd_rot": cfg.vfdm.kd_rot,
                 "m_e": cfg.vfdm.m_e, "m_l": cfg.vfdm.m_l,
                 "I_e": cfg.vfdm.I_e.tolist(), "I_l": cfg.vfdm.I_l.tolist(),
                 "dt_ctrl": cfg.vfdm.dt_ctrl, "max_iters": cfg.vfdm.max_iters,
                 "tol_pos": cfg.vfdm.tol_pos, "tol_rot": cfg.vfdm.tol_rot,
                 "regularization": cfg.vfdm.regularization},
        "satellites": [sat_doc(s) for s in cfg.satellites],
        "contact": {"stiffness": cfg.contact.stiffness, "damping": cfg.contact.damping},
        "force_script": [p.to_dict() for p in cfg.force_script],
    }


def save_config(cfg: ScenarioConfig, path):
    with open(path, "w") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2)
        fh.write("\n")


def bundled_config(name: str) -> ScenarioConfig:
    """One of the shipped scenario documents ('free_float' or 'collision')."""
    ref = resources.files("orbemu") / "configs" / f"{name}.json"
    return config_from_dict(json.loads(ref.read_text()))
