/** Wire protocol shared with the harness stream server.
 *
 * The console is purely a protocol client: every outbound message here has a
 * scripted equivalent on the harness side, so a live session can always be
 * replayed deterministically.
 */

export type Vec3 = [number, number, number];
/** Unit quaternion, scalar last. */
export type Quat = [number, number, number, number];

export interface PoseWire {
  position: Vec3;
  orientation: Quat;
}

export interface WrenchWire {
  force: Vec3;
  torque: Vec3;
}

export interface SatFrame {
  name: string;
  des_pose: PoseWire;
  act_pose: PoseWire;
  wrench: WrenchWire;
}

export type SimStatus = "running" | "paused" | "safety_stop";

export interface TelemetryFrame {
  type: "state";
  tick: number;
  t: number;
  sats: SatFrame[];
  status: SimStatus;
}

export interface AckFrame {
  type: "ack";
  command: string;
}

export interface ErrorFrame {
  type: "error";
  message: string;
}

export type InboundFrame = TelemetryFrame | AckFrame | ErrorFrame;

export interface ImpulseCommand {
  sat: string;
  force: Vec3;
  torque: Vec3;
  durationS: number;
}

/** UI safety bounds on operator pushes. */
export const MAX_FORCE_N = 5.0;
export const MAX_TORQUE_NM = 1.0;
export const MAX_DURATION_S = 5.0;

const vec3 = (v: unknown): v is Vec3 =>
  Array.isArray(v) && v.length === 3 && v.every((x) => typeof x === "number" && isFinite(x));

const norm = (v: Vec3): number => Math.hypot(v[0], v[1], v[2]);

/** Parse one inbound message; null for anything malformed (never throws). */
export function parseFrame(raw: string): InboundFrame | null {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof doc !== "object" || doc === null) return null;
  const d = doc as Record<string, unknown>;
  switch (d.type) {
    case "ack":
      return typeof d.command === "string" ? { type: "ack", command: d.command } : null;
    case "error":
      return typeof d.message === "string" ? { type: "error", message: d.message } : null;
    case "state": {
      if (typeof d.tick !== "number" || typeof d.t !== "number") return null;
      if (d.status !== "running" && d.status !== "paused" && d.status !== "safety_stop") return null;
      if (!Array.isArray(d.sats)) return null;
      for (const s of d.sats as SatFrame[]) {
        if (typeof s.name !== "string") return null;
        if (!vec3(s.des_pose?.position) || !vec3(s.act_pose?.position)) return null;
        if (!vec3(s.wrench?.force) || !vec3(s.wrench?.torque)) return null;
      }
      return d as unknown as TelemetryFrame;
    }
    default:
      return null;
  }
}

/** Wire encoding of an operator push; null when the gesture is empty or out of bounds. */
export function impulseMessage(cmd: ImpulseCommand): string | null {
  if (norm(cmd.force) === 0 && norm(cmd.torque) === 0) return null;
  if (norm(cmd.force) > MAX_FORCE_N || norm(cmd.torque) > MAX_TORQUE_NM) return null;
  if (!(cmd.durationS > 0) || cmd.durationS > MAX_DURATION_S) return null;
  return JSON.stringify({
    type: "impulse",
    sat: cmd.sat,
    force: cmd.force,
    torque: cmd.torque,
    duration_s: cmd.durationS,
  });
}

export function controlMessage(action: "pause" | "resume" | "reset"): string {
  return JSON.stringify({ type: "cmd", action });
}

/** Parameter paths the harness accepts from clients. */
export const PARAM_PATHS = [
  "vfdm.kp_trans",
  "vfdm.kd_trans",
  "vfdm.kp_rot",
  "vfdm.kd_rot",
] as const;
export type ParamPath = (typeof PARAM_PATHS)[number];

export function setParamMessage(path: ParamPath, value: number): string | null {
  if (!PARAM_PATHS.includes(path) || !(value >= 0) || !isFinite(value)) return null;
  return JSON.stringify({ type: "set_param", path, value });
}
