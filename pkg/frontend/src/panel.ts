/** Operator controls: impulse entry, run control, gain sliders, status banner.
 *
 * Pure DOM — every click funnels through the protocol encoders, so the panel
 * can never emit a message the golden tests don't cover.
 */

import {
  ImpulseCommand,
  MAX_DURATION_S,
  MAX_FORCE_N,
  PARAM_PATHS,
  ParamPath,
  SimStatus,
  controlMessage,
  impulseMessage,
  setParamMessage,
} from "./protocol.js";
import { Session } from "./session.js";

const PARAM_LABELS: Record<ParamPath, string> = {
  "vfdm.kp_trans": "P gain, translation",
  "vfdm.kd_trans": "D gain, translation",
  "vfdm.kp_rot": "P gain, rotation",
  "vfdm.kd_rot": "D gain, rotation",
};
const PARAM_DEFAULTS: Record<ParamPath, number> = {
  "vfdm.kp_trans": 10.0,
  "vfdm.kd_trans": 0.0,
  "vfdm.kp_rot": 1.0,
  "vfdm.kd_rot": 0.0,
};

export class Panel {
  private banner: HTMLElement;
  private toastBox: HTMLElement;
  private impulseInputs: HTMLInputElement[] = [];
  private impulseButton: HTMLButtonElement;
  private satSelect: HTMLSelectElement;

  constructor(
    root: HTMLElement,
    private session: Session,
  ) {
    this.banner = el("div", "banner");
    this.toastBox = el("div", "toasts");
    root.append(this.banner, this.toastBox);

    const run = el("div", "row");
    for (const action of ["pause", "resume", "reset"] as const) {
      const b = el("button") as HTMLButtonElement;
      b.textContent = action;
      b.onclick = () => this.trySend(controlMessage(action));
      run.append(b);
    }
    root.append(run);

    const impulse = el("div", "row");
    this.satSelect = el("select") as HTMLSelectElement;
    impulse.append(this.satSelect);
    for (const axis of ["Fx", "Fy", "Fz"]) {
      const input = el("input") as HTMLInputElement;
      input.type = "number";
      input.step = "0.1";
      input.value = "0";
      input.title = `${axis} [N], |F| <= ${MAX_FORCE_N}`;
      this.impulseInputs.push(input);
      impulse.append(input);
    }
    const duration = el("input") as HTMLInputElement;
    duration.type = "number";
    duration.step = "0.1";
    duration.value = "0.5";
    duration.title = `duration [s], <= ${MAX_DURATION_S}`;
    this.impulseInputs.push(duration);
    impulse.append(duration);
    this.impulseButton = el("button") as HTMLButtonElement;
    this.impulseButton.textContent = "push";
    this.impulseButton.onclick = () => this.sendImpulse();
    impulse.append(this.impulseButton);
    root.append(impulse);

    for (const path of PARAM_PATHS) {
      const row = el("div", "row");
      const label = el("label");
      label.textContent = PARAM_LABELS[path];
      const slider = el("input") as HTMLInputElement;
      slider.type = "range";
      slider.min = "0";
      slider.max = String(PARAM_DEFAULTS[path] * 2 || 2);
      slider.step = "0.1";
      slider.value = String(PARAM_DEFAULTS[path]);
      slider.onchange = () => {
        const msg = setParamMessage(path, Number(slider.value));
        if (msg !== null) this.trySend(msg);
      };
      row.append(label, slider);
      root.append(row);
    }
  }

  /** Current numeric entry as a command; exposed for drag gestures to reuse. */
  sendImpulse(force?: [number, number, number]): void {
    const cmd: ImpulseCommand = {
      sat: this.satSelect.value,
      force: force ?? [
        Number(this.impulseInputs[0].value),
        Number(this.impulseInputs[1].value),
        Number(this.impulseInputs[2].value),
      ],
      torque: [0, 0, 0],
      durationS: Number(this.impulseInputs[3].value),
    };
    const msg = impulseMessage(cmd);
    if (msg === null) {
      this.toast("impulse out of bounds or empty — not sent");
      return;
    }
    if (!this.trySend(msg)) return;
    this.toast(`push sent: [${cmd.force.map((v) => v.toFixed(2)).join(", ")}] N`);
  }

  setStatus(status: SimStatus, satNames: string[]): void {
    if (this.satSelect.options.length !== satNames.length) {
      this.satSelect.replaceChildren(
        ...satNames.map((n) => {
          const o = document.createElement("option");
          o.value = o.textContent = n;
          return o;
        }),
      );
    }
    const stopped = status === "safety_stop";
    this.banner.textContent = stopped ? "SAFETY STOP — robot at joint limit, motion frozen" : "";
    this.banner.classList.toggle("alert", stopped);
    this.impulseButton.disabled = stopped;
  }

  setConnection(state: string): void {
    if (state === "lost" || state === "connecting") {
      this.banner.textContent = `connection ${state}…`;
      this.banner.classList.remove("alert");
    }
  }

  toast(message: string): void {
    const t = el("div", "toast");
    t.textContent = message;
    this.toastBox.append(t);
    setTimeout(() => t.remove(), 4000);
  }

  private trySend(message: string): boolean {
    const ok = this.session.send(message);
    if (!ok) this.toast("not connected — command dropped");
    return ok;
  }
}

function el(tag: string, className?: string): HTMLElement {
  const e = document.createElement(tag);
  if (className) e.className = className;
  return e;
}
