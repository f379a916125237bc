"""On-orbit interaction emulator: orbital dynamics, virtual-forward-dynamics
Cartesian control, simulated plant and contact, and a scenario harness."""

__version__ = "0.1.0"

from .chains import UR10E_HOME, ur10e_like
from .config import ScenarioConfig, bundled_config, load_config, save_config
from .contact import ContactParams
from .frames import Frame, FrameMapping, Wrench
from .harness import RunResult, Simulation, read_log, run_scenario, write_log
from .kinematics import ChainLink, JointState, Pose, SerialChain, \
    forward_kinematics, geometric_jacobian
from .ods import OrbitParams, SatelliteBody, SatelliteState
from .plant import SensorParams, ServoParams
from .vfdm import CartesianError, VfdmParams, pose_error, solve_to_convergence

__all__ = [
    "Frame", "FrameMapping", "Wrench",
    "ChainLink", "JointState", "Pose", "SerialChain",
    "OrbitParams", "SatelliteBody", "SatelliteState",
    "CartesianError", "VfdmParams",
    "ContactParams", "SensorParams", "ServoParams",
    "ScenarioConfig", "bundled_config", "load_config", "save_config",
    "RunResult", "Simulation", "run_scenario", "write_log",
]
