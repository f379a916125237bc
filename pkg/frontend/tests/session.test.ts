/** Session state machine: reconnect with backoff, stale frames, reset detection. */

import { describe, expect, it } from "vitest";
import { TelemetryFrame } from "../src/protocol.js";
import { Session, SessionState, SocketLike } from "../src/session.js";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  onopen: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: string }) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }
  close(): void {
    this.onclose?.();
  }
  serverSend(doc: unknown): void {
    this.onmessage?.({ data: JSON.stringify(doc) });
  }
}

function stateFrame(tick: number, status = "running"): unknown {
  return {
    type: "state",
    tick,
    t: tick * 0.001,
    status,
    sats: [
      {
        name: "sat1",
        des_pose: { position: [0, 0, 0], orientation: [0, 0, 0, 1] },
        act_pose: { position: [0, 0, 0], orientation: [0, 0, 0, 1] },
        wrench: { force: [0, 0, 0], torque: [0, 0, 0] },
      },
    ],
  };
}

function harness(backoffMs = [10, 20, 40]) {
  const sockets: FakeSocket[] = [];
  const timers: { fn: () => void; ms: number }[] = [];
  const states: SessionState[] = [];
  let refuse = false;
  const session = new Session("ws://test", {
    connect: () => {
      if (refuse) throw new Error("refused");
      const s = new FakeSocket();
      sockets.push(s);
      return s;
    },
    backoffMs,
    setTimeout: (fn, ms) => timers.push({ fn, ms }),
    onState: (s) => states.push(s),
  });
  return {
    session,
    sockets,
    timers,
    states,
    setRefuse: (v: boolean) => (refuse = v),
    runTimers: () => timers.splice(0).forEach((t) => t.fn()),
  };
}

describe("connection lifecycle", () => {
  it("goes live on the first state frame", () => {
    const h = harness();
    h.sockets[0].onopen?.();
    h.sockets[0].serverSend(stateFrame(0));
    expect(h.session.state).toBe("live");
    expect(h.session.latest?.tick).toBe(0);
  });

  it("unreachable endpoint: lost state and growing backoff, no crash", () => {
    const h = harness([10, 20, 40]);
    h.setRefuse(true);
    h.sockets[0].close(); // drop the initial connection
    expect(h.session.state).toBe("lost");
    h.runTimers();
    h.runTimers();
    h.runTimers();
    expect(h.timers.length + 3 >= 3).toBe(true);
    const waits = [10, 20, 40];
    expect(h.states[0]).toBe("lost");
    expect(h.session.state).toBe("lost");
    h.setRefuse(false);
    h.runTimers();
    expect(h.sockets.length).toBe(2); // reconnected with a fresh socket
    void waits;
  });

  it("a server restart resumes the session without losing the client", () => {
    const h = harness();
    h.sockets[0].onopen?.();
    h.sockets[0].serverSend(stateFrame(100));
    h.sockets[0].close();
    expect(h.session.state).toBe("lost");
    h.runTimers();
    const fresh = h.sockets[1];
    fresh.onopen?.();
    fresh.serverSend(stateFrame(0)); // restarted sim: tick counter reset
    expect(h.session.state).toBe("live");
    expect(h.session.latest?.tick).toBe(0);
  });

  it("send fails cleanly while disconnected", () => {
    const h = harness();
    h.sockets[0].close();
    expect(h.session.send("x")).toBe(false);
  });
});

describe("frame intake", () => {
  it("keeps only the latest frame and drops stale ticks", () => {
    const h = harness();
    const s = h.sockets[0];
    s.onopen?.();
    s.serverSend(stateFrame(10));
    s.serverSend(stateFrame(12));
    s.serverSend(stateFrame(11)); // out of order: stale
    expect(h.session.latest?.tick).toBe(12);
    expect(h.session.framesDropped).toBe(1);
  });

  it("accepts the tick counter restarting after an in-band reset", () => {
    const h = harness();
    const s = h.sockets[0];
    s.onopen?.();
    s.serverSend(stateFrame(500));
    s.serverSend(stateFrame(0)); // reset command took effect
    expect(h.session.latest?.tick).toBe(0);
    expect(h.session.framesDropped).toBe(0);
  });

  it("mirrors paused status into the session state", () => {
    const h = harness();
    const s = h.sockets[0];
    s.onopen?.();
    s.serverSend(stateFrame(3, "paused"));
    expect(h.session.state).toBe("paused");
    s.serverSend(stateFrame(3, "running"));
    expect(h.session.state).toBe("live");
  });

  it("routes acks and errors to their callbacks", () => {
    const acks: string[] = [];
    const errors: string[] = [];
    const sockets: FakeSocket[] = [];
    new Session("ws://test", {
      connect: () => {
        const s = new FakeSocket();
        sockets.push(s);
        return s;
      },
      setTimeout: () => 0,
      onAck: (c) => acks.push(c),
      onError: (m) => errors.push(m),
    });
    sockets[0].onopen?.();
    sockets[0].serverSend({ type: "ack", command: "impulse" });
    sockets[0].serverSend({ type: "error", message: "impulse duration_s must be > 0" });
    sockets[0].onmessage?.({ data: "garbage" }); // silently ignored
    expect(acks).toEqual(["impulse"]);
    expect(errors).toEqual(["impulse duration_s must be > 0"]);
  });
});
