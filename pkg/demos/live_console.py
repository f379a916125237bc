"""Serve a scenario over WebSocket for the browser console.

Starts the bundled free-float scenario paced to wall clock and streams state
frames at up to 60 Hz. Connect the console in frontend/ (or any WebSocket
client) to ws://127.0.0.1:8765, push the satellite around, and watch the
response — live impulses are applied exactly like scripted pulses, so any
session can be replayed deterministically afterwards.
"""

from orbemu import Simulation, bundled_config
from orbemu.stream import serve

cfg = bundled_config("free_float")
cfg.duration = 600.0  # long session; stop with Ctrl-C
cfg.force_script.clear()  # quiet start: all pushes come from the console

print("serving ws://127.0.0.1:8765 (Ctrl-C to stop)")
serve(Simulation(cfg), host="127.0.0.1", port=8765, real_time=True)
