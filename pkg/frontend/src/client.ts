/** Connection state machine around one live-session socket.
 *
 * The socket is injected as a factory so tests (and the node e2e harness)
 * can substitute their own WebSocket implementation; the browser passes
 * the native one. Snapshots land in a one-slot buffer: the render loop
 * takes the newest and anything older is dropped unseen.
 */

import {
  ClientMessage,
  HelloMessage,
  ProtocolError,
  ResultMessage,
  ServerMessage,
  SnapshotMessage,
  encodeClientMessage,
  parseServerMessage,
} from "./protocol.js";

/** The subset of the browser WebSocket API the client relies on. */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export type ConnectionState =
  | "connecting" // socket opening, hello not seen yet
  | "ready" // hello in hand, start not sent
  | "running"
  | "finished" // result received; socket may close freely now
  | "error";

export interface ClientEvents {
  onState?: (state: ConnectionState, detail: string) => void;
  onSnapshot?: (snap: SnapshotMessage) => void;
  onResult?: (result: ResultMessage) => void;
}

export class LiveClient {
  state: ConnectionState = "connecting";
  detail = "";
  hello: HelloMessage | null = null;
  result: ResultMessage | null = null;

  private sock: SocketLike | null = null;
  private latest: SnapshotMessage | null = null;
  private readonly url: string;
  private readonly factory: SocketFactory;
  private readonly events: ClientEvents;

  constructor(url: string, factory: SocketFactory, events: ClientEvents = {}) {
    this.url = url;
    this.factory = factory;
    this.events = events;
    this.open();
  }

  /** Tear down any existing socket and reconnect from scratch. */
  retry(): void {
    if (this.sock) {
      const old = this.sock;
      this.sock = null;
      old.onclose = null;
      old.onerror = null;
      try {
        old.close();
      } catch {
        /* already dead */
      }
    }
    this.hello = null;
    this.latest = null;
    this.result = null;
    this.open();
  }

  private open(): void {
    this.setState("connecting", "");
    let sock: SocketLike;
    try {
      sock = this.factory(this.url);
    } catch (exc) {
      this.setState("error", `connection failed: ${String(exc)}`);
      return;
    }
    this.sock = sock;
    sock.onmessage = (ev) => this.onFrame(String(ev.data));
    sock.onerror = () => {
      if (this.state !== "finished") this.setState("error", "connection error");
    };
    sock.onclose = () => {
      if (this.state !== "finished" && this.state !== "error") {
        this.setState("error", "server closed the connection");
      }
    };
  }

  private onFrame(text: string): void {
    let msg: ServerMessage;
    try {
      msg = parseServerMessage(text);
    } catch (exc) {
      if (exc instanceof ProtocolError) {
        this.setState("error", exc.message);
        return;
      }
      throw exc;
    }
    if (msg.type === "hello") {
      this.hello = msg;
      this.setState("ready", "");
    } else if (msg.type === "snapshot") {
      this.latest = msg; // overwrites: drop-stale policy
      this.events.onSnapshot?.(msg);
    } else {
      this.result = msg;
      this.setState("finished", "");
      this.events.onResult?.(msg);
    }
  }

  private setState(state: ConnectionState, detail: string): void {
    this.state = state;
    this.detail = detail;
    this.events.onState?.(state, detail);
  }

  private send(msg: ClientMessage): void {
    if (!this.sock) return;
    try {
      this.sock.send(encodeClientMessage(msg));
    } catch {
      if (this.state !== "finished") this.setState("error", "send failed");
    }
  }

  start(overrides: Record<string, number | string> = {}): void {
    this.send({ type: "start", config_overrides: overrides });
    this.setState("running", "");
  }

  sendPointer(x: number, y: number, down: boolean): void {
    this.send({ type: "pointer", x: Math.round(x), y: Math.round(y), down });
  }

  pause(): void {
    this.send({ type: "pause" });
  }

  save(): void {
    this.send({ type: "save" });
  }

  /** Newest unrendered snapshot, or null; taking it empties the slot. */
  takeLatest(): SnapshotMessage | null {
    const snap = this.latest;
    this.latest = null;
    return snap;
  }

  close(): void {
    this.sock?.close();
  }
}
