// Top-down canvas renderer.
//
// World space is y-up; the view looks straight down, mapping world x to
// screen right and world z to screen up. Cubes only ever spin about the
// vertical axis, so their outline angle is the yaw pulled from the
// quaternion alone. Everything drawn comes from the welcome snapshot plus
// one state message -- no motion is invented client-side.

import { GameState, Welcome } from "./protocol.js";

/** The slice of CanvasRenderingContext2D the renderer uses. */
export interface Ctx2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: CanvasTextAlign;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  stroke(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
}

/** Yaw in radians about +y; exact for yaw-only quaternions [w, x, y, z]. */
export function yawOf(q: number[]): number {
  return 2 * Math.atan2(q[2], q[0]);
}

export class Renderer {
  constructor(
    private ctx: Ctx2D,
    private width: number,
    private height: number,
  ) {}

  draw(welcome: Welcome, state: GameState): void {
    const ctx = this.ctx;
    const half = welcome.scene.table_half_extent;
    const scale = (Math.min(this.width, this.height) / 2 - 40) / half;
    const cx = this.width / 2;
    const cy = this.height / 2;
    const sx = (x: number) => cx + x * scale;
    const sy = (z: number) => cy - z * scale;

    ctx.fillStyle = "#10151c";
    ctx.fillRect(0, 0, this.width, this.height);

    // Table felt and the rail band the ball reflects off.
    ctx.fillStyle = "#175d3a";
    ctx.fillRect(sx(-half), sy(half), 2 * half * scale, 2 * half * scale);
    ctx.strokeStyle = "#7a4a21";
    ctx.lineWidth = 8;
    ctx.strokeRect(sx(-half), sy(half), 2 * half * scale, 2 * half * scale);

    const positions = new Map<number, number[]>();
    for (const cube of welcome.scene.cubes) positions.set(cube.id, cube.p);
    const cubeHalf = welcome.scene.cube_half_extent ?? 0.25;

    ctx.strokeStyle = "#ffd75e";
    ctx.lineWidth = 2;
    for (const row of state.cubes) {
      const p = positions.get(row[0]);
      if (p === undefined) continue;
      this.cubeOutline(p[0], p[2], cubeHalf, yawOf(row.slice(1)), sx, sy);
    }

    if (state.ball !== undefined && welcome.scene.ball !== undefined) {
      ctx.fillStyle = "#f2f2f2";
      ctx.beginPath();
      ctx.arc(sx(state.ball.p[0]), sy(state.ball.p[2]), welcome.scene.ball.radius * scale, 0, 2 * Math.PI);
      ctx.fill();
    }

    ctx.fillStyle = "#e8e8e8";
    ctx.font = "16px sans-serif";
    ctx.textAlign = "left";
    ctx.fillText(`Remaining: ${state.active_cubes.length}`, 12, 24);

    if (state.won) {
      ctx.fillStyle = "rgba(16, 21, 28, 0.6)";
      ctx.fillRect(0, cy - 48, this.width, 96);
      ctx.fillStyle = "#ffd75e";
      ctx.font = "48px sans-serif";
      ctx.textAlign = "center";
      ctx.fillText("You win!", cx, cy + 16);
    }
  }

  private cubeOutline(
    x: number,
    z: number,
    half: number,
    yaw: number,
    sx: (x: number) => number,
    sy: (z: number) => number,
  ): void {
    const c = Math.cos(yaw);
    const s = Math.sin(yaw);
    const ctx = this.ctx;
    ctx.beginPath();
    const corners = [
      [-half, -half],
      [half, -half],
      [half, half],
      [-half, half],
    ];
    corners.forEach(([lx, lz], i) => {
      // Rotation about +y carries +x toward -z.
      const wx = x + lx * c + lz * s;
      const wz = z - lx * s + lz * c;
      if (i === 0) ctx.moveTo(sx(wx), sy(wz));
      else ctx.lineTo(sx(wx), sy(wz));
    });
    ctx.closePath();
    ctx.stroke();
  }
}
