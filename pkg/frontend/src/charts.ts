/** Strip charts: measured force, velocity, and position of one satellite.
 *
 * The chart data model is pure (telemetry frames in, plottable series out) so
 * it can be exercised headless; drawing is a thin canvas pass over it.
 * Velocity is differenced from consecutive desired positions for display —
 * the console computes no physics, this is chart smoothing of what the
 * harness already integrated.
 */

import { TelemetryFrame, Vec3 } from "./protocol.js";

export const CHANNELS = ["force", "velocity", "position"] as const;
export type Channel = (typeof CHANNELS)[number];

export interface ChartPoint {
  t: number;
  v: Vec3;
}

export class StripCharts {
  readonly series: Record<Channel, ChartPoint[]> = { force: [], velocity: [], position: [] };
  private lastT: number | null = null;
  private lastPos: Vec3 | null = null;

  constructor(
    readonly satName: string,
    readonly capacity = 1200,
  ) {}

  push(frame: TelemetryFrame): void {
    const sat = frame.sats.find((s) => s.name === this.satName);
    if (sat === undefined) return;
    if (this.lastT !== null && frame.t < this.lastT) this.reset(); // sim restarted
    const pos = sat.des_pose.position;
    this.append("force", frame.t, sat.wrench.force);
    this.append("position", frame.t, pos);
    if (this.lastT !== null && this.lastPos !== null && frame.t > this.lastT) {
      const dt = frame.t - this.lastT;
      this.append("velocity", frame.t, [
        (pos[0] - this.lastPos[0]) / dt,
        (pos[1] - this.lastPos[1]) / dt,
        (pos[2] - this.lastPos[2]) / dt,
      ]);
    }
    this.lastT = frame.t;
    this.lastPos = pos;
  }

  reset(): void {
    for (const c of CHANNELS) this.series[c].length = 0;
    this.lastT = null;
    this.lastPos = null;
  }

  private append(channel: Channel, t: number, v: Vec3): void {
    const s = this.series[channel];
    s.push({ t, v: [v[0], v[1], v[2]] });
    if (s.length > this.capacity) s.shift();
  }

  /** Peak-to-peak span per axis — how visible a deflection is on the chart. */
  deflection(channel: Channel): Vec3 {
    const s = this.series[channel];
    const span: Vec3 = [0, 0, 0];
    for (let axis = 0; axis < 3; axis++) {
      let lo = Infinity;
      let hi = -Infinity;
      for (const p of s) {
        lo = Math.min(lo, p.v[axis]);
        hi = Math.max(hi, p.v[axis]);
      }
      span[axis] = s.length > 0 ? hi - lo : 0;
    }
    return span;
  }
}

const AXIS_COLORS = ["#e4572e", "#4c9f70", "#4f7cac"];
const LABELS: Record<Channel, string> = {
  force: "measured force [N]",
  velocity: "velocity [m/s]",
  position: "position [m]",
};

export function drawChart(
  ctx: CanvasRenderingContext2D,
  charts: StripCharts,
  channel: Channel,
  width: number,
  height: number,
): void {
  const s = charts.series[channel];
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#888";
  ctx.font = "11px sans-serif";
  ctx.fillText(LABELS[channel], 6, 13);
  if (s.length < 2) return;

  const t0 = s[0].t;
  const t1 = s[s.length - 1].t;
  let lo = Infinity;
  let hi = -Infinity;
  for (const p of s) {
    for (const v of p.v) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  const pad = Math.max((hi - lo) * 0.1, 1e-9);
  lo -= pad;
  hi += pad;

  const x = (t: number) => ((t - t0) / Math.max(t1 - t0, 1e-9)) * (width - 10) + 5;
  const y = (v: number) => height - 5 - ((v - lo) / (hi - lo)) * (height - 24);

  for (let axis = 0; axis < 3; axis++) {
    ctx.strokeStyle = AXIS_COLORS[axis];
    ctx.lineWidth = 1.2;
    ctx.beginPath();
    s.forEach((p, i) => (i === 0 ? ctx.moveTo(x(p.t), y(p.v[axis])) : ctx.lineTo(x(p.t), y(p.v[axis]))));
    ctx.stroke();
  }
}
