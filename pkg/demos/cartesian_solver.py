"""Offline Cartesian-to-joint solves with the virtual-dynamics controller.

Instead of inverting kinematics algebraically, the controller pushes a
conditioned virtual model of the arm toward the target pose with a PD wrench
and integrates its forward dynamics until the pose error vanishes. The same
cycle that tracks waypoints online therefore doubles as an IK solver.
"""

import numpy as np

from orbemu import UR10E_HOME, VfdmParams, forward_kinematics, pose_error, \
    solve_to_convergence, ur10e_like

chain = ur10e_like()
params = VfdmParams()
rng = np.random.default_rng(3)

print("target poses from random joint configurations, solved from home:\n")
for k in range(5):
    target = forward_kinematics(chain, rng.uniform(-np.pi, np.pi, 6))
    q, iters, ok = solve_to_convergence(chain, UR10E_HOME, target, params)
    tn, rn = pose_error(target, forward_kinematics(chain, q)).norms()
    print(f"  target {k}: {'converged' if ok else 'FAILED'} in {iters:5d} cycles, "
          f"residual {tn * 1e6:7.1f} um / {rn * 1e3:.2f} mrad")

print("\nnear a singular (fully extended) start the damped virtual dynamics")
print("keep every cycle finite and small:")
from orbemu.vfdm import vfdm_cycle, virtual_chain
from orbemu.kinematics import Pose

q = np.zeros(6)
target = Pose(np.array([-0.9, -0.2, 0.4]), forward_kinematics(chain, q).orientation)
vchain = virtual_chain(chain, params)
steps = []
for _ in range(200):
    q_next, _ = vfdm_cycle(vchain, q, target, params)
    steps.append(np.max(np.abs(q_next - q)))
    q = q_next
print(f"  max per-cycle joint step over 200 cycles: {max(steps):.4f} rad")
