/** Message shapes for the live-session channel, mirroring the server JSON. */

export interface HelloMessage {
  type: "hello";
  width: number;
  height: number;
  tick_ms: number;
  duration_ticks: number;
  palette: string[];
}

export interface SnapshotBox {
  id: number;
  x: number;
  y: number;
  hw: number;
  hh: number;
  color: number;
  hero: boolean;
}

export interface SnapshotMessage {
  type: "snapshot";
  tick: number;
  boxes: SnapshotBox[];
  bps: number;
  noc: number;
  state: "found" | "lost";
  clock: string;
  paused: boolean;
}

export interface ResultMessage {
  type: "result";
  kilobytes: number;
  log: string;
}

export type ServerMessage = HelloMessage | SnapshotMessage | ResultMessage;

export type ClientMessage =
  | { type: "start"; config_overrides: Record<string, number | string> }
  | { type: "pointer"; x: number; y: number; down: boolean }
  | { type: "pause" }
  | { type: "save" };

export class ProtocolError extends Error {}

function need(cond: boolean, what: string): asserts cond {
  if (!cond) throw new ProtocolError(`malformed message: ${what}`);
}

const isNum = (v: unknown): v is number => typeof v === "number" && Number.isFinite(v);

/** Validate one server frame. Throws ProtocolError on anything off-shape. */
export function parseServerMessage(text: string): ServerMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new ProtocolError("not JSON");
  }
  need(typeof raw === "object" && raw !== null, "not an object");
  const msg = raw as Record<string, unknown>;
  switch (msg.type) {
    case "hello": {
      need(isNum(msg.width) && isNum(msg.height), "hello bounds");
      need(isNum(msg.tick_ms) && isNum(msg.duration_ticks), "hello timing");
      need(
        Array.isArray(msg.palette) && msg.palette.every((c) => typeof c === "string"),
        "hello palette",
      );
      return msg as unknown as HelloMessage;
    }
    case "snapshot": {
      need(isNum(msg.tick) && isNum(msg.bps) && isNum(msg.noc), "snapshot counters");
      need(msg.state === "found" || msg.state === "lost", "snapshot state");
      need(typeof msg.clock === "string", "snapshot clock");
      need(typeof msg.paused === "boolean", "snapshot paused");
      need(Array.isArray(msg.boxes), "snapshot boxes");
      for (const b of msg.boxes as Record<string, unknown>[]) {
        need(
          isNum(b.id) && isNum(b.x) && isNum(b.y) && isNum(b.hw) && isNum(b.hh),
          "box geometry",
        );
        need(isNum(b.color) && typeof b.hero === "boolean", "box style");
      }
      return msg as unknown as SnapshotMessage;
    }
    case "result": {
      need(isNum(msg.kilobytes), "result kilobytes");
      need(typeof msg.log === "string", "result log");
      return msg as unknown as ResultMessage;
    }
    default:
      throw new ProtocolError(`unknown message type ${JSON.stringify(msg.type)}`);
  }
}

export function encodeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

/** Remaining-time HUD string: 300 ticks at 10/s -> "0:30", 6000 -> "10:0". */
export function countdown(durationTicks: number, tick: number, tickMs: number): string {
  const left = Math.max(0, durationTicks - tick);
  const seconds = Math.floor((left * tickMs) / 1000);
  return `${Math.floor(seconds / 60)}:${seconds % 60}`;
}
