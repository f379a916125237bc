"""Two satellites on a collision course, each played by its own robot.

The bundled scenario starts the mockups 0.8 m apart closing at 0.1 m/s. The
contact model produces equal and opposite forces at the executed poses; the
measured wrenches feed back into both orbital states, so the bodies rebound
with momentum exchanged through the facility loop rather than by script.
"""

import numpy as np

from orbemu import bundled_config, run_scenario

cfg = bundled_config("collision")
res = run_scenario(cfg)
m = res.metrics

rows = res.rows
t = rows[:, 1]
depth = rows[:, -1]
contact = np.flatnonzero(depth > 0)
v1, v2 = rows[:, 16], rows[:, 2 + 33 + 14]

print(f"contact episodes: {m['contact_episodes']} "
      f"({m['contact_ticks']} ticks, t = {t[contact[0]]:.2f}..{t[contact[-1]]:.2f} s)")
print(f"max penetration:  {depth.max() * 1e3:.1f} mm")

pre, post = contact[0] - 100, contact[-1] + 100
print(f"\nclosing speeds  before: {v1[pre]:+.4f} / {v2[pre]:+.4f} m/s")
print(f"                after:  {v1[post]:+.4f} / {v2[post]:+.4f} m/s")
print(f"effective restitution:  {-(v1[post] - v2[post]) / (v1[pre] - v2[pre]):.2f}")

print(f"\nforce symmetry residual: {m['force_symmetry_residual']:.2e} N")
for name, sat in m["satellites"].items():
    print(f"{name}: max isochronous error {sat['max_pos_err'] * 1e3:.2f} mm, "
          f"peak force {sat['peak_force']:.2f} N")
