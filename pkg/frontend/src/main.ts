/** Browser entry point: full-window canvas, HUD, retry banner, end screen.
 *
 * URL query keys become config overrides (?duration_ticks=300&rng_seed=7);
 * "gain" and "server" are consumed by the UI itself.
 */

import { LiveClient, SocketLike } from "./client.js";
import { InputTracker } from "./input.js";
import { Surface, drawFrame, resultLine, worldTransform } from "./render.js";
import { SnapshotMessage } from "./protocol.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("scene");
const banner = el<HTMLDivElement>("banner");
const endScreen = el<HTMLDivElement>("end");
const endText = el<HTMLParagraphElement>("end-text");
const download = el<HTMLAnchorElement>("end-download");

const params = new URLSearchParams(location.search);
const overrides: Record<string, string> = {};
for (const [key, value] of params) {
  if (key !== "gain" && key !== "server") overrides[key] = value;
}
const gain = Number(params.get("gain") ?? "1") || 1;
const serverUrl = params.get("server") ?? `ws://${location.hostname || "127.0.0.1"}:8787/`;

function fit(): void {
  canvas.width = window.innerWidth;
  canvas.height = window.innerHeight;
}
fit();
window.addEventListener("resize", fit);

const ctx = canvas.getContext("2d");
if (!ctx) throw new Error("2d canvas unsupported");

let tracker: InputTracker | null = null;
let lastSnap: SnapshotMessage | null = null;

// the native socket is a structural superset of SocketLike
const client = new LiveClient(serverUrl, (url) => new WebSocket(url) as unknown as SocketLike, {
  onState(state, detail) {
    if (state === "error") {
      banner.textContent = `${detail || "connection lost"} — click to retry`;
      banner.hidden = false;
    } else {
      banner.hidden = true;
    }
    if (state === "ready") {
      client.start(overrides);
    }
  },
  onSnapshot() {
    // one outbound sample per inbound frame keeps the server fed at tick rate
    if (tracker) {
      client.sendPointer(tracker.state.x, tracker.state.y, tracker.state.down);
    }
  },
  onResult(result) {
    endText.textContent = resultLine(result.kilobytes);
    download.href = URL.createObjectURL(new Blob([result.log], { type: "text/plain" }));
    download.download = "brainb.log";
    endScreen.hidden = false;
  },
});

banner.addEventListener("click", () => client.retry());

function frame(): void {
  const hello = client.hello;
  const snap = client.takeLatest();
  if (hello && snap) {
    lastSnap = snap;
    if (!tracker) {
      tracker = new InputTracker({ width: hello.width, height: hello.height }, gain);
      const view = () => ({ width: canvas.width, height: canvas.height });
      tracker.attach(canvas, window, client, (px) => {
        const { scale } = worldTransform(hello, view());
        return px / scale;
      });
    }
  }
  if (hello && lastSnap) {
    const surface = ctx as unknown as Surface; // fillStyle only ever gets strings
    drawFrame(surface, { width: canvas.width, height: canvas.height }, hello, lastSnap);
  }
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
