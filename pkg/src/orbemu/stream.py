"""Live telemetry/command bridge: WebSocket JSON frames around a Simulation.

Outbound `state` frames are decimated to at most 60 per simulated second and
broadcast fire-and-forget (a slow or absent client never stalls the loop).
Inbound commands are validated and queued on the simulation, which applies
them at the next tick boundary.
"""

from __future__ import annotations

import asyncio
import json

import numpy as np

from .errors import ConfigError
from .harness import SAT_BLOCK, Simulation

MAX_FPS = 60.0


def state_frame(sim: Simulation) -> dict:
    """The protocol `state` frame for the most recent tick."""
    row = sim.rows[-1] if sim.rows else None
    sats = []
    for i, name in enumerate(sim.names):
        if row is None:
            setup = sim.config.satellites[i]
            des = act = {"position": setup.state.rho.tolist(),
                         "orientation": setup.state.eps.tolist()}
            wrench = {"force": [0.0] * 3, "torque": [0.0] * 3}
        else:
            o = 2 + SAT_BLOCK * i
            des = {"position": row[o:o + 3].tolist(),
                   "orientation": row[o + 3:o + 7].tolist()}
            act = {"position": row[o + 7:o + 10].tolist(),
                   "orientation": row[o + 10:o + 14].tolist()}
            wrench = {"force": row[o + 20:o + 23].tolist(),
                      "torque": row[o + 23:o + 26].tolist()}
        sats.append({"name": name, "des_pose": des, "act_pose": act, "wrench": wrench})
    return {"type": "state",
            "tick": int(row[0]) if row is not None else 0,
            "t": float(row[1]) if row is not None else 0.0,
            "sats": sats,
            "status": sim.status}


class StreamServer:
    """Serves one Simulation to any number of browser/console clients."""

    def __init__(self, sim: Simulation, host="127.0.0.1", port=8765, real_time=True):
        self.sim = sim
        self.host = host
        self.port = port
        self.real_time = real_time
        self.clients: set = set()
        self._frame_stride = max(1, int(round(1.0 / (MAX_FPS * sim.config.dt_sim))))

    def _broadcast(self, doc: dict):
        dead = []
        payload = json.dumps(doc)
        for ws in self.clients:
            try:
                # fire-and-forget: enqueue on the connection, never await
                asyncio.ensure_future(ws.send(payload))
            except Exception:
                dead.append(ws)
        for ws in dead:
            self.clients.discard(ws)

    async def _handle(self, ws):
        self.clients.add(ws)
        try:
            await ws.send(json.dumps(state_frame(self.sim)))
            async for message in ws:
                try:
                    cmd = json.loads(message)
                    if not isinstance(cmd, dict):
                        raise ConfigError("command must be a JSON object")
                    self.sim.queue_command(cmd)
                    await ws.send(json.dumps({"type": "ack", "command": cmd.get("type")}))
                except (json.JSONDecodeError, ConfigError, TypeError, ValueError) as err:
                    await ws.send(json.dumps({"type": "error", "message": str(err)}))
        finally:
            self.clients.discard(ws)

    async def run(self):
        """Serve and step until the scenario completes."""
        import websockets

        async with websockets.serve(self._handle, self.host, self.port):
            loop = asyncio.get_running_loop()
            start = loop.time()
            while not self.sim.done:
                if self.sim.paused:
                    self._broadcast(state_frame(self.sim))
                    await asyncio.sleep(self._frame_stride * self.sim.config.dt_sim)
                    start = loop.time() - self.sim.tick * self.sim.config.dt_sim
                    continue
                for _ in range(self._frame_stride):
                    if self.sim.done or self.sim.paused:
                        break
                    self.sim.step()
                self._broadcast(state_frame(self.sim))
                if self.real_time:
                    lag = self.sim.tick * self.sim.config.dt_sim - (loop.time() - start)
                    if lag > 0:
                        await asyncio.sleep(lag)
                    else:
                        await asyncio.sleep(0)
                else:
                    await asyncio.sleep(0)
            self._broadcast(state_frame(self.sim))
            await asyncio.sleep(0.05)


def serve(sim: Simulation, host="127.0.0.1", port=8765, real_time=True):
    asyncio.run(StreamServer(sim, host, port, real_time).run())
