import { describe, expect, it } from "vitest";

import { HelloMessage, SnapshotBox, SnapshotMessage } from "../src/protocol.js";
import {
  HERO_LABEL,
  Surface,
  drawFrame,
  hudLine,
  resultLine,
  worldTransform,
} from "../src/render.js";

class FakeSurface implements Surface {
  fillStyle = "";
  globalAlpha = 1;
  font = "";
  textAlign = "";
  textBaseline = "";
  rects: { x: number; y: number; w: number; h: number; style: string }[] = [];
  texts: { text: string; x: number; y: number; style: string }[] = [];

  fillRect(x: number, y: number, w: number, h: number): void {
    this.rects.push({ x, y, w, h, style: this.fillStyle });
  }

  fillText(text: string, x: number, y: number): void {
    this.texts.push({ text, x, y, style: this.fillStyle });
  }
}

const hello: HelloMessage = {
  type: "hello",
  width: 320,
  height: 200,
  tick_ms: 100,
  duration_ticks: 6000,
  palette: ["#101820", "#f2f3f4", "#e69f00", "#56b4e9"],
};

function box(partial: Partial<SnapshotBox> = {}): SnapshotBox {
  return { id: 1, x: 50, y: 60, hw: 8, hh: 6, color: 2, hero: false, ...partial };
}

function snap(boxes: SnapshotBox[], partial: Partial<SnapshotMessage> = {}): SnapshotMessage {
  return {
    type: "snapshot",
    tick: 41,
    boxes,
    bps: 28170,
    noc: boxes.length,
    state: "found",
    clock: "0:4",
    paused: false,
    ...partial,
  };
}

const view = { width: 320, height: 200 }; // scale 1, no letterbox

describe("drawFrame", () => {
  it("draws one rectangle per box over one background", () => {
    const boxes = Array.from({ length: 71 }, (_, i) =>
      box({ id: i, x: 10 + i, hero: i === 0 }),
    );
    const ctx = new FakeSurface();
    drawFrame(ctx, view, hello, snap(boxes));
    expect(ctx.rects.length).toBe(1 + 71);
    expect(ctx.rects[0]).toMatchObject({ x: 0, y: 0, w: 320, h: 200, style: "#101820" });
  });

  it("labels the hero box", () => {
    const ctx = new FakeSurface();
    drawFrame(ctx, view, hello, snap([box({ hero: true, x: 100, y: 80 })]));
    const label = ctx.texts.find((t) => t.text === HERO_LABEL);
    expect(label).toBeDefined();
    expect(label!.x).toBe(100);
    expect(label!.y).toBeLessThan(80); // above the box
  });

  it("draws no label without a hero in frame", () => {
    const ctx = new FakeSurface();
    drawFrame(ctx, view, hello, snap([box(), box({ id: 2 })]));
    expect(ctx.texts.some((t) => t.text === HERO_LABEL)).toBe(false);
  });

  it("box size follows half extents inclusively", () => {
    const ctx = new FakeSurface();
    drawFrame(ctx, view, hello, snap([box({ x: 50, y: 60, hw: 8, hh: 6 })]));
    expect(ctx.rects[1]).toMatchObject({ x: 42, y: 54, w: 17, h: 13 });
  });

  it("paused snapshots get a veil and the paused text", () => {
    const ctx = new FakeSurface();
    drawFrame(ctx, view, hello, snap([box()], { paused: true }));
    expect(ctx.rects.length).toBe(1 + 1 + 1); // background, box, veil
    expect(ctx.texts.some((t) => t.text === "paused")).toBe(true);
  });

  it("out-of-palette color indices fall back instead of crashing", () => {
    const ctx = new FakeSurface();
    drawFrame(ctx, view, hello, snap([box({ color: 99 })]));
    expect(ctx.rects[1]!.style).toBe("#ff00ff");
  });
});

describe("worldTransform", () => {
  it("letterboxes while preserving aspect", () => {
    const t = worldTransform(hello, { width: 640, height: 480 });
    expect(t.scale).toBe(2); // 640/320=2 beats 480/200=2.4
    expect(t.ox).toBe(0);
    expect(t.oy).toBe(40); // (480 - 400) / 2
  });
});

describe("hud and result text", () => {
  it("shows countdown, counters and tracking state", () => {
    const line = hudLine(hello, snap([box()], { tick: 650, state: "lost" }));
    expect(line).toBe("8:55  noc 1  bps 28170  Lost");
  });

  it("prints the score sentence exactly", () => {
    expect(resultLine(6.37927)).toBe("U R about 6.37927 Kilobytes");
    expect(resultLine(0)).toBe("U R about 0 Kilobytes");
  });
});
