/** Console entry point: wires session, scene triptych, strip charts, panel.
 *
 * URL query: ?endpoint=ws://host:port&sat=<name to chart>
 */

import { CHANNELS, StripCharts, drawChart } from "./charts.js";
import { Panel } from "./panel.js";
import { ImpulseCommand, impulseMessage } from "./protocol.js";
import { PANES, drawScene, fitView, unproject } from "./scene.js";
import { Session } from "./session.js";

const query = new URLSearchParams(location.search);
const endpoint = query.get("endpoint") ?? "ws://127.0.0.1:8765";
const SCENE_SIZE = 260;
const CHART_W = 640;
const CHART_H = 140;
const DRAG_NEWTON_PER_PX = 0.02;

const sceneRow = document.getElementById("scene") as HTMLElement;
const chartCol = document.getElementById("charts") as HTMLElement;
const panelBox = document.getElementById("panel") as HTMLElement;

const sceneCtx = PANES.map((pane) => {
  const canvas = document.createElement("canvas");
  canvas.width = canvas.height = SCENE_SIZE;
  canvas.dataset.pane = pane.label;
  sceneRow.append(canvas);
  return canvas.getContext("2d")!;
});

const chartCtx = CHANNELS.map(() => {
  const canvas = document.createElement("canvas");
  canvas.width = CHART_W;
  canvas.height = CHART_H;
  chartCol.append(canvas);
  return canvas.getContext("2d")!;
});

let charts: StripCharts | null = null;
let panel: Panel; // assigned before the session can deliver a frame

const session = new Session(endpoint, {
  onFrame: (frame) => {
    if (charts === null || frame.sats.every((s) => s.name !== charts!.satName)) {
      charts = new StripCharts(query.get("sat") ?? frame.sats[0]?.name ?? "");
    }
    charts.push(frame);
    panel.setStatus(frame.status, frame.sats.map((s) => s.name));
  },
  onError: (message) => panel.toast(`rejected: ${message}`),
  onState: (state) => panel.setConnection(state),
});
panel = new Panel(panelBox, session);

// drag on a scene pane pushes the nearest satellite in that projection plane
sceneRow.addEventListener("mousedown", (down) => {
  const canvas = down.target as HTMLCanvasElement;
  const pane = PANES.find((p) => p.label === canvas.dataset?.pane);
  const frame = session.latest;
  if (pane === undefined || frame === null) return;
  const release = (up: MouseEvent) => {
    window.removeEventListener("mouseup", release);
    const view = fitView(frame.sats, pane);
    const delta = unproject(up.clientX - down.clientX, up.clientY - down.clientY, pane, view, SCENE_SIZE);
    const force = delta.map((v) => v * DRAG_NEWTON_PER_PX * SCENE_SIZE) as [number, number, number];
    const cmd: ImpulseCommand = {
      sat: charts?.satName ?? frame.sats[0].name,
      force,
      torque: [0, 0, 0],
      durationS: 0.5,
    };
    const msg = impulseMessage(cmd); // zero-length drags encode to null
    if (msg !== null && session.send(msg)) {
      panel.toast(`push sent: [${force.map((v) => v.toFixed(2)).join(", ")}] N`);
    }
  };
  window.addEventListener("mouseup", release);
});

function render(): void {
  const frame = session.latest;
  if (frame !== null) {
    PANES.forEach((pane, i) => drawScene(sceneCtx[i], frame, pane, fitView(frame.sats, pane), SCENE_SIZE));
    if (charts !== null) {
      CHANNELS.forEach((channel, i) => drawChart(chartCtx[i], charts!, channel, CHART_W, CHART_H));
    }
  }
  requestAnimationFrame(render);
}
requestAnimationFrame(render);
