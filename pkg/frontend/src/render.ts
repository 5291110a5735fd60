/** Canvas drawing: scene, hero label, HUD, pause veil.
 *
 * Drawing goes through Surface, the structural slice of
 * CanvasRenderingContext2D that is actually used; tests substitute a
 * recording fake, the browser passes the real context.
 */

import { HelloMessage, SnapshotMessage, countdown } from "./protocol.js";

export interface Surface {
  fillStyle: string;
  globalAlpha: number;
  font: string;
  textAlign: string;
  textBaseline: string;
  fillRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
}

export const HERO_LABEL = "Samu Entropy";

export interface Viewport {
  width: number; // canvas pixels
  height: number;
}

/** Uniform world-to-canvas scale with letterbox centering. */
export function worldTransform(hello: HelloMessage, view: Viewport) {
  const scale = Math.min(view.width / hello.width, view.height / hello.height);
  const ox = (view.width - hello.width * scale) / 2;
  const oy = (view.height - hello.height * scale) / 2;
  return { scale, ox, oy };
}

function color(palette: string[], index: number): string {
  return palette[index] ?? "#ff00ff"; // out-of-palette: loud, not crashing
}

export function drawFrame(
  ctx: Surface,
  view: Viewport,
  hello: HelloMessage,
  snap: SnapshotMessage,
): void {
  const { scale, ox, oy } = worldTransform(hello, view);
  ctx.globalAlpha = 1;
  ctx.fillStyle = color(hello.palette, 0);
  ctx.fillRect(0, 0, view.width, view.height);

  // boxes in list order; later entries overdraw earlier ones
  for (const b of snap.boxes) {
    ctx.fillStyle = color(hello.palette, b.color);
    ctx.fillRect(
      ox + (b.x - b.hw) * scale,
      oy + (b.y - b.hh) * scale,
      (2 * b.hw + 1) * scale,
      (2 * b.hh + 1) * scale,
    );
  }
  for (const b of snap.boxes) {
    if (!b.hero) continue;
    ctx.fillStyle = color(hello.palette, 1);
    ctx.font = `${Math.max(12, Math.round(12 * scale))}px system-ui, sans-serif`;
    ctx.textAlign = "center";
    ctx.textBaseline = "bottom";
    ctx.fillText(HERO_LABEL, ox + b.x * scale, oy + (b.y - b.hh - 4) * scale);
  }

  drawHud(ctx, view, hello, snap);

  if (snap.paused) {
    ctx.globalAlpha = 0.55;
    ctx.fillStyle = "#000000";
    ctx.fillRect(0, 0, view.width, view.height);
    ctx.globalAlpha = 1;
    ctx.fillStyle = "#ffffff";
    ctx.font = "32px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText("paused", view.width / 2, view.height / 2);
  }
}

export function hudLine(hello: HelloMessage, snap: SnapshotMessage): string {
  const left = countdown(hello.duration_ticks, snap.tick, hello.tick_ms);
  const state = snap.state === "found" ? "Found" : "Lost";
  return `${left}  noc ${snap.noc}  bps ${snap.bps}  ${state}`;
}

function drawHud(
  ctx: Surface,
  view: Viewport,
  hello: HelloMessage,
  snap: SnapshotMessage,
): void {
  ctx.globalAlpha = 1;
  ctx.fillStyle = color(hello.palette, 1);
  ctx.font = "16px ui-monospace, monospace";
  ctx.textAlign = "left";
  ctx.textBaseline = "top";
  ctx.fillText(hudLine(hello, snap), 8, 8);
}

/** End screen: the score sentence exactly as the log prints it. */
export function resultLine(kilobytes: number): string {
  // %.6g equivalent for the values the server actually sends
  const text = Number(kilobytes.toPrecision(6)).toString();
  return `U R about ${text} Kilobytes`;
}
