import { parseServerMessage, type ControlMessage, type ServerMessage } from "./protocol.js";

// Reconnecting wrapper around the /ws endpoint.
//
// Controls sent while the socket is down are not queued up: only the most
// recent one is kept and flushed on reconnect. Every control here is
// absolute (set m to X, set mode to Y), so replaying a backlog would just
// thrash the engine with stale values.

const RETRY_START_MS = 500;
const RETRY_CAP_MS = 8000;

export interface SocketLike {
  readyState: number;
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export interface EngineSocketHooks {
  onMessage: (msg: ServerMessage) => void;
  onConnected?: (connected: boolean) => void;
}

const OPEN = 1;

export class EngineSocket {
  private ws: SocketLike | null = null;
  private retryMs = RETRY_START_MS;
  private pending: ControlMessage | null = null;
  private closed = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private url: string,
    private hooks: EngineSocketHooks,
    private makeSocket: (url: string) => SocketLike = (u) => new WebSocket(u) as SocketLike,
  ) {
    this.connect();
  }

  private connect(): void {
    const ws = this.makeSocket(this.url);
    this.ws = ws;

    ws.onopen = () => {
      this.retryMs = RETRY_START_MS;
      this.hooks.onConnected?.(true);
      if (this.pending) {
        ws.send(JSON.stringify(this.pending));
        this.pending = null;
      }
    };

    ws.onmessage = (ev) => {
      if (typeof ev.data !== "string") return;
      const msg = parseServerMessage(ev.data);
      if (msg) this.hooks.onMessage(msg);
    };

    ws.onclose = () => {
      this.hooks.onConnected?.(false);
      if (this.closed) return;
      this.timer = setTimeout(() => this.connect(), this.retryMs);
      this.retryMs = Math.min(this.retryMs * 2, RETRY_CAP_MS);
    };

    ws.onerror = () => {
      // onclose follows and owns the retry
    };
  }

  /** Send a control now, or hold the latest one until the link is back. */
  send(control: ControlMessage): void {
    if (this.ws && this.ws.readyState === OPEN) {
      this.ws.send(JSON.stringify(control));
    } else {
      this.pending = control;
    }
  }

  close(): void {
    this.closed = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.ws?.close();
  }
}
