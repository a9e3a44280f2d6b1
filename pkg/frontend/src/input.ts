// Arrow-key tracking with edge-triggered axis reporting.
//
// The derived axes are h = right - left and v = up - down, each in
// {-1, 0, 1}. The onChange callback fires exactly once per change of the
// derived pair, never for key repeats or for key events that leave the
// pair unchanged (e.g. pressing Left while Right is already held flips
// h from 1 to 0 -> one callback; releasing it flips back -> one more).

const AXIS_KEYS = ["ArrowLeft", "ArrowRight", "ArrowUp", "ArrowDown"];

export class KeyTracker {
  pressed = new Set<string>();
  h = 0;
  v = 0;

  constructor(public onChange: (h: number, v: number) => void) {}

  keyDown(code: string, repeat = false): void {
    if (repeat || !AXIS_KEYS.includes(code) || this.pressed.has(code)) return;
    this.pressed.add(code);
    this.refresh();
  }

  keyUp(code: string): void {
    if (!this.pressed.delete(code)) return;
    this.refresh();
  }

  /** Drop every held key (window blur); reports (0, 0) at most once. */
  releaseAll(): void {
    if (this.pressed.size === 0) return;
    this.pressed.clear();
    this.refresh();
  }

  private refresh(): void {
    const h = (this.pressed.has("ArrowRight") ? 1 : 0) - (this.pressed.has("ArrowLeft") ? 1 : 0);
    const v = (this.pressed.has("ArrowUp") ? 1 : 0) - (this.pressed.has("ArrowDown") ? 1 : 0);
    if (h === this.h && v === this.v) return;
    this.h = h;
    this.v = v;
    this.onChange(h, v);
  }
}
