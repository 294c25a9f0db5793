// Wire types for the engine's WebSocket endpoint at /ws.
// Server pushes frames and status, client sends small control objects,
// anything the server rejects comes back as {"type": "error", ...}.

export interface FrameMessage {
  type: "frame";
  t: number;
  m: number;
  positions: [number, number][];
}

export interface StatusMessage {
  type: "status";
  source: string;
  poorSignal: number;
  mode: "forward" | "reverse";
  degraded: boolean;
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage = FrameMessage | StatusMessage | ErrorMessage;

export function setM(value: number): { type: "setM"; value: number } {
  return { type: "setM", value };
}

export function setMode(value: "forward" | "reverse"): { type: "setMode"; value: string } {
  return { type: "setMode", value };
}

export function setParam(name: string, value: number): { type: "setParam"; name: string; value: number } {
  return { type: "setParam", name, value };
}

export type ControlMessage =
  | ReturnType<typeof setM>
  | ReturnType<typeof setMode>
  | ReturnType<typeof setParam>;

/** Parse one incoming text frame. Returns null for anything malformed
 *  rather than throwing; the stream keeps flowing past bad messages. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;

  if (msg.type === "frame") {
    if (typeof msg.t !== "number" || typeof msg.m !== "number" || !Array.isArray(msg.positions)) {
      return null;
    }
    for (const p of msg.positions) {
      if (!Array.isArray(p) || p.length !== 2 || typeof p[0] !== "number" || typeof p[1] !== "number") {
        return null;
      }
    }
    return { type: "frame", t: msg.t, m: msg.m, positions: msg.positions as [number, number][] };
  }

  if (msg.type === "status") {
    if (
      typeof msg.source !== "string" ||
      typeof msg.poorSignal !== "number" ||
      (msg.mode !== "forward" && msg.mode !== "reverse") ||
      typeof msg.degraded !== "boolean"
    ) {
      return null;
    }
    return {
      type: "status",
      source: msg.source,
      poorSignal: msg.poorSignal,
      mode: msg.mode,
      degraded: msg.degraded,
    };
  }

  if (msg.type === "error") {
    if (typeof msg.message !== "string") return null;
    return { type: "error", message: msg.message };
  }

  return null;
}
