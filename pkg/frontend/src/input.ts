/** Pointer and key capture.
 *
 * The tracked pointer lives in world coordinates and moves by screen
 * displacement times the gain setting, clamped to the arena. Gain is a
 * UI-side sensitivity knob; the server only ever sees world x, y, down.
 * Keys: P toggles pause, S saves (one message per physical press).
 */

export interface PointerState {
  x: number;
  y: number;
  down: boolean;
}

export interface InputSink {
  pause(): void;
  save(): void;
}

export interface EventSource {
  addEventListener(type: string, handler: (ev: any) => void): void;
}

export interface Bounds {
  width: number;
  height: number;
}

export class InputTracker {
  readonly state: PointerState;
  gain: number;
  private readonly bounds: Bounds;
  private lastScreen: { x: number; y: number } | null = null;

  constructor(bounds: Bounds, gain = 1.0) {
    this.bounds = bounds;
    this.gain = gain;
    this.state = { x: Math.floor(bounds.width / 2), y: Math.floor(bounds.height / 2), down: false };
  }

  /** Apply one screen-space displacement, already in world units. */
  move(dxWorld: number, dyWorld: number): void {
    this.state.x = clamp(this.state.x + dxWorld * this.gain, 0, this.bounds.width - 1);
    this.state.y = clamp(this.state.y + dyWorld * this.gain, 0, this.bounds.height - 1);
  }

  press(): void {
    this.state.down = true;
  }

  release(): void {
    this.state.down = false;
  }

  /** Keyboard dispatch; repeat events (held key) are ignored. */
  key(key: string, repeat: boolean, sink: InputSink): void {
    if (repeat) return;
    const k = key.toLowerCase();
    if (k === "p") sink.pause();
    else if (k === "s") sink.save();
  }

  /** Wire browser events. screenToWorld converts a screen-pixel delta to
   * world units (the inverse of the render transform's scale). */
  attach(
    pointerTarget: EventSource,
    keyTarget: EventSource,
    sink: InputSink,
    screenToWorld: (px: number) => number,
  ): void {
    pointerTarget.addEventListener("pointermove", (ev: PointerEvent) => {
      if (this.lastScreen !== null) {
        this.move(
          screenToWorld(ev.clientX - this.lastScreen.x),
          screenToWorld(ev.clientY - this.lastScreen.y),
        );
      }
      this.lastScreen = { x: ev.clientX, y: ev.clientY };
    });
    pointerTarget.addEventListener("pointerdown", () => this.press());
    pointerTarget.addEventListener("pointerup", () => this.release());
    keyTarget.addEventListener("keydown", (ev: KeyboardEvent) =>
      this.key(ev.key, ev.repeat, sink),
    );
  }
}

function clamp(v: number, lo: number, hi: number): number {
  return v < lo ? lo : v > hi ? hi : v;
}
