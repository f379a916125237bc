/** Connection state machine: connect, reconnect with backoff, frame intake.
 *
 * Frames arrive faster than the render loop wants them; the session keeps only
 * the latest (latest-wins buffer). Stale ticks are discarded, except across a
 * reset, which announces itself by the tick counter restarting while the
 * stream keeps flowing.
 */

import { InboundFrame, TelemetryFrame, parseFrame } from "./protocol.js";

export type SessionState = "connecting" | "live" | "paused" | "lost";

/** The subset of WebSocket the session needs; injectable for tests. */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export interface SessionOptions {
  /** Socket factory; defaults to the browser WebSocket. */
  connect?: (url: string) => SocketLike;
  /** Reconnect schedule in ms; the last entry repeats. */
  backoffMs?: number[];
  setTimeout?: (fn: () => void, ms: number) => unknown;
  onFrame?: (frame: TelemetryFrame) => void;
  onAck?: (command: string) => void;
  onError?: (message: string) => void;
  onState?: (state: SessionState) => void;
}

const DEFAULT_BACKOFF = [250, 500, 1000, 2000, 5000];

export class Session {
  state: SessionState = "connecting";
  latest: TelemetryFrame | null = null;
  framesSeen = 0;
  framesDropped = 0;

  private socket: SocketLike | null = null;
  private attempts = 0;
  private closed = false;

  constructor(
    private url: string,
    private opts: SessionOptions = {},
  ) {
    this.open();
  }

  private setState(next: SessionState): void {
    if (this.state !== next) {
      this.state = next;
      this.opts.onState?.(next);
    }
  }

  private open(): void {
    const connect = this.opts.connect ?? ((u: string) => new WebSocket(u) as unknown as SocketLike);
    this.setState("connecting");
    let socket: SocketLike;
    try {
      socket = connect(this.url);
    } catch {
      this.scheduleReconnect();
      return;
    }
    this.socket = socket;
    socket.onopen = () => {
      this.attempts = 0;
    };
    socket.onmessage = (ev) => this.receive(ev.data);
    socket.onerror = () => undefined; // onclose always follows
    socket.onclose = () => {
      this.socket = null;
      if (!this.closed) this.scheduleReconnect();
    };
  }

  private scheduleReconnect(): void {
    this.setState("lost");
    const backoff = this.opts.backoffMs ?? DEFAULT_BACKOFF;
    const wait = backoff[Math.min(this.attempts, backoff.length - 1)];
    this.attempts += 1;
    (this.opts.setTimeout ?? setTimeout)(() => {
      if (!this.closed) this.open();
    }, wait);
  }

  private receive(raw: string): void {
    const frame: InboundFrame | null = parseFrame(raw);
    if (frame === null) return;
    if (frame.type === "ack") {
      this.opts.onAck?.(frame.command);
      return;
    }
    if (frame.type === "error") {
      this.opts.onError?.(frame.message);
      return;
    }
    // a tick running backwards means either a stale frame (drop) or a sim
    // reset (accept and restart the counter)
    if (this.latest !== null && frame.tick < this.latest.tick) {
      const isReset = frame.tick <= 1 || frame.status !== this.latest.status;
      if (!isReset) {
        this.framesDropped += 1;
        return;
      }
    }
    this.latest = frame;
    this.framesSeen += 1;
    this.setState(frame.status === "paused" ? "paused" : "live");
    this.opts.onFrame?.(frame);
  }

  /** Send a pre-encoded protocol message; false when not connected. */
  send(message: string): boolean {
    if (this.socket === null || this.state === "lost" || this.state === "connecting") {
      return false;
    }
    try {
      this.socket.send(message);
      return true;
    } catch {
      return false;
    }
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
    this.socket = null;
  }
}
