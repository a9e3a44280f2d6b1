// Shared test plumbing: fixture loading and fakes.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { Socket } from "../src/client.js";
import { StateMessage, Welcome } from "../src/protocol.js";
import { Ctx2D } from "../src/render.js";

export interface FixtureFrame {
  dir: "send" | "recv";
  msg: Record<string, unknown>;
}

const HERE = dirname(fileURLToPath(import.meta.url));

/** Frames captured from a live session service (see make_fixture.py). */
export function loadFixture(): FixtureFrame[] {
  const text = readFileSync(join(HERE, "fixtures", "session.jsonl"), "utf-8");
  return text
    .split("\n")
    .filter((line) => line.length > 0)
    .map((line) => JSON.parse(line) as FixtureFrame);
}

export function fixtureWelcome(frames: FixtureFrame[]): Welcome {
  const frame = frames.find((f) => f.dir === "recv" && f.msg.type === "welcome");
  if (frame === undefined) throw new Error("fixture has no welcome");
  return frame.msg as unknown as Welcome;
}

export function fixtureStates(frames: FixtureFrame[]): StateMessage[] {
  return frames
    .filter((f) => f.dir === "recv" && f.msg.type === "state")
    .map((f) => f.msg as unknown as StateMessage);
}

export class FakeSocket implements Socket {
  sent: string[] = [];
  closed = false;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
  }
}

export interface CtxOp {
  op: string;
  args: unknown[];
}

/** Records every draw call so tests can count shapes and read labels. */
export class FakeCtx implements Ctx2D {
  fillStyle: string | CanvasGradient | CanvasPattern = "";
  strokeStyle: string | CanvasGradient | CanvasPattern = "";
  lineWidth = 0;
  font = "";
  textAlign: CanvasTextAlign = "left";
  ops: CtxOp[] = [];

  private log(op: string, ...args: unknown[]): void {
    this.ops.push({ op, args });
  }

  fillRect(x: number, y: number, w: number, h: number): void {
    this.log("fillRect", x, y, w, h);
  }
  strokeRect(x: number, y: number, w: number, h: number): void {
    this.log("strokeRect", x, y, w, h);
  }
  beginPath(): void {
    this.log("beginPath");
  }
  moveTo(x: number, y: number): void {
    this.log("moveTo", x, y);
  }
  lineTo(x: number, y: number): void {
    this.log("lineTo", x, y);
  }
  closePath(): void {
    this.log("closePath");
  }
  stroke(): void {
    this.log("stroke");
  }
  arc(x: number, y: number, r: number, a0: number, a1: number): void {
    this.log("arc", x, y, r, a0, a1);
  }
  fill(): void {
    this.log("fill");
  }
  fillText(text: string, x: number, y: number): void {
    this.log("fillText", text, x, y);
  }

  count(op: string): number {
    return this.ops.filter((entry) => entry.op === op).length;
  }

  texts(): string[] {
    return this.ops.filter((entry) => entry.op === "fillText").map((entry) => String(entry.args[0]));
  }
}
