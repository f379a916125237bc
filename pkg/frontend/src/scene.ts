/** Orthographic triptych of the rotating frame: xy, xz, and yz projections.
 *
 * Each pane shows the satellites' desired pose (ghost outline) and executed
 * pose (solid disc) plus an arrow for the measured wrench, so tracking lag
 * and contact forces are visible at a glance. Projection math is exported for
 * tests; drawing is canvas-only.
 */

import { SatFrame, TelemetryFrame, Vec3 } from "./protocol.js";

export interface Pane {
  label: string;
  ax: number; // world axis on the screen x
  ay: number; // world axis on the screen y
}

export const PANES: Pane[] = [
  { label: "xy", ax: 0, ay: 1 },
  { label: "xz", ax: 0, ay: 2 },
  { label: "yz", ax: 1, ay: 2 },
];

export interface ViewBox {
  center: [number, number];
  halfSpan: number;
}

/** Square view box containing every pose in the pane, never collapsing. */
export function fitView(sats: SatFrame[], pane: Pane, minHalfSpan = 0.5): ViewBox {
  let loX = Infinity, hiX = -Infinity, loY = Infinity, hiY = -Infinity;
  for (const s of sats) {
    for (const p of [s.des_pose.position, s.act_pose.position]) {
      loX = Math.min(loX, p[pane.ax]);
      hiX = Math.max(hiX, p[pane.ax]);
      loY = Math.min(loY, p[pane.ay]);
      hiY = Math.max(hiY, p[pane.ay]);
    }
  }
  if (!isFinite(loX)) {
    loX = hiX = loY = hiY = 0;
  }
  const halfSpan = Math.max((hiX - loX) / 2, (hiY - loY) / 2, minHalfSpan) * 1.2;
  return { center: [(loX + hiX) / 2, (loY + hiY) / 2], halfSpan };
}

export function project(p: Vec3, pane: Pane, view: ViewBox, size: number): [number, number] {
  const sx = ((p[pane.ax] - view.center[0]) / (2 * view.halfSpan) + 0.5) * size;
  const sy = (0.5 - (p[pane.ay] - view.center[1]) / (2 * view.halfSpan)) * size;
  return [sx, sy];
}

/** Screen pixels back to a world-plane displacement (drag-to-push gestures). */
export function unproject(dx: number, dy: number, pane: Pane, view: ViewBox, size: number): Vec3 {
  const v: Vec3 = [0, 0, 0];
  v[pane.ax] = (dx / size) * 2 * view.halfSpan;
  v[pane.ay] = (-dy / size) * 2 * view.halfSpan;
  return v;
}

const SAT_COLORS = ["#4f7cac", "#e4572e", "#4c9f70"];

export function drawScene(
  ctx: CanvasRenderingContext2D,
  frame: TelemetryFrame,
  pane: Pane,
  view: ViewBox,
  size: number,
): void {
  ctx.clearRect(0, 0, size, size);
  ctx.strokeStyle = "#ddd";
  ctx.strokeRect(0.5, 0.5, size - 1, size - 1);
  ctx.fillStyle = "#888";
  ctx.font = "11px sans-serif";
  ctx.fillText(pane.label, 6, 13);

  frame.sats.forEach((sat, i) => {
    const color = SAT_COLORS[i % SAT_COLORS.length];
    const [dx, dy] = project(sat.des_pose.position, pane, view, size);
    const [axp, ayp] = project(sat.act_pose.position, pane, view, size);

    ctx.strokeStyle = color; // desired: ghost outline
    ctx.setLineDash([3, 3]);
    ctx.beginPath();
    ctx.arc(dx, dy, 8, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.setLineDash([]);

    ctx.fillStyle = color; // executed: solid disc
    ctx.beginPath();
    ctx.arc(axp, ayp, 6, 0, 2 * Math.PI);
    ctx.fill();

    const f = sat.wrench.force;
    const mag = Math.hypot(f[pane.ax], f[pane.ay]);
    if (mag > 1e-6) {
      const scale = 30 / Math.max(mag, 1); // ~30 px per N, capped
      ctx.strokeStyle = "#222";
      ctx.beginPath();
      ctx.moveTo(axp, ayp);
      ctx.lineTo(axp + f[pane.ax] * scale, ayp - f[pane.ay] * scale);
      ctx.stroke();
    }
    ctx.fillStyle = "#555";
    ctx.fillText(sat.name, axp + 9, ayp - 9);
  });
}
