/** Golden-message tests: the exact wire bytes for every outbound command. */

import { describe, expect, it } from "vitest";
import {
  MAX_FORCE_N,
  controlMessage,
  impulseMessage,
  parseFrame,
  setParamMessage,
} from "../src/protocol.js";

describe("impulse encoding", () => {
  it("numeric entry (2,0,0) N for 0.5 s encodes exactly per the protocol", () => {
    const msg = impulseMessage({ sat: "sat1", force: [2, 0, 0], torque: [0, 0, 0], durationS: 0.5 });
    expect(msg).toBe('{"type":"impulse","sat":"sat1","force":[2,0,0],"torque":[0,0,0],"duration_s":0.5}');
  });

  it("torque-only pushes encode too", () => {
    const msg = impulseMessage({ sat: "s", force: [0, 0, 0], torque: [0, 0, 0.01], durationS: 1 });
    expect(JSON.parse(msg!)).toEqual({ type: "impulse", sat: "s", force: [0, 0, 0], torque: [0, 0, 0.01], duration_s: 1 });
  });

  it("a zero-length gesture produces no command", () => {
    expect(impulseMessage({ sat: "sat1", force: [0, 0, 0], torque: [0, 0, 0], durationS: 0.5 })).toBeNull();
  });

  it("out-of-bounds magnitudes and durations are refused client-side", () => {
    expect(impulseMessage({ sat: "s", force: [MAX_FORCE_N + 1, 0, 0], torque: [0, 0, 0], durationS: 0.5 })).toBeNull();
    expect(impulseMessage({ sat: "s", force: [1, 0, 0], torque: [0, 0, 0], durationS: 0 })).toBeNull();
    expect(impulseMessage({ sat: "s", force: [1, 0, 0], torque: [0, 0, 0], durationS: 99 })).toBeNull();
    expect(impulseMessage({ sat: "s", force: [0, 0, 0], torque: [2, 0, 0], durationS: 0.5 })).toBeNull();
  });
});

describe("control and parameter encoding", () => {
  it("run-control golden messages", () => {
    expect(controlMessage("pause")).toBe('{"type":"cmd","action":"pause"}');
    expect(controlMessage("resume")).toBe('{"type":"cmd","action":"resume"}');
    expect(controlMessage("reset")).toBe('{"type":"cmd","action":"reset"}');
  });

  it("gain-slider golden message", () => {
    expect(setParamMessage("vfdm.kp_trans", 12.5)).toBe('{"type":"set_param","path":"vfdm.kp_trans","value":12.5}');
  });

  it("negative or non-finite values are refused", () => {
    expect(setParamMessage("vfdm.kp_rot", -1)).toBeNull();
    expect(setParamMessage("vfdm.kp_rot", NaN)).toBeNull();
  });
});

describe("inbound parsing", () => {
  const state = JSON.stringify({
    type: "state",
    tick: 5,
    t: 0.005,
    status: "running",
    sats: [
      {
        name: "sat1",
        des_pose: { position: [0, 0, 0], orientation: [0, 0, 0, 1] },
        act_pose: { position: [0, 0, 0], orientation: [0, 0, 0, 1] },
        wrench: { force: [0, 0, 0], torque: [0, 0, 0] },
      },
    ],
  });

  it("round-trips a state frame", () => {
    const frame = parseFrame(state);
    expect(frame?.type).toBe("state");
    if (frame?.type === "state") {
      expect(frame.tick).toBe(5);
      expect(frame.sats[0].name).toBe("sat1");
    }
  });

  it("parses ack and error frames", () => {
    expect(parseFrame('{"type":"ack","command":"impulse"}')).toEqual({ type: "ack", command: "impulse" });
    expect(parseFrame('{"type":"error","message":"nope"}')).toEqual({ type: "error", message: "nope" });
  });

  it("never throws on garbage", () => {
    expect(parseFrame("{not json")).toBeNull();
    expect(parseFrame('"just a string"')).toBeNull();
    expect(parseFrame('{"type":"state","tick":"x"}')).toBeNull();
    expect(parseFrame('{"type":"state","tick":1,"t":0,"status":"flying","sats":[]}')).toBeNull();
  });
});
