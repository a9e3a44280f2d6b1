// flow/1 wire types and parsing.
//
// The server speaks JSON text frames over a WebSocket at /session.
// Client -> server: hello, input (sample-and-hold axes), restart, mode.
// Server -> client: welcome (once per (re)start), state (one per tick), error.

export const PROTOCOL = "flow/1";

export interface BallState {
  p: number[];
  q: number[];
  v: number[];
  w: number[];
}

export interface GameEvent {
  kind: string;
  [key: string]: unknown;
}

export interface GameState {
  step: number;
  t: number;
  active_cubes: number[];
  /** One entry per active cube: [id, qw, qx, qy, qz]. */
  cubes: number[][];
  events: GameEvent[];
  won: boolean;
  ball?: BallState;
}

export interface CubeInfo {
  id: number;
  name: string;
  p: number[];
}

export interface SceneInfo {
  hash: string;
  table_half_extent: number;
  cubes: CubeInfo[];
  cube_half_extent?: number;
  ball?: { id: number; name: string; radius: number; p: number[] };
}

export interface Welcome {
  type: "welcome";
  proto: string;
  mode: string;
  tick_hz: number;
  fixed_dt: number;
  scene: SceneInfo;
  state: GameState;
}

export interface StateMessage extends GameState {
  type: "state";
}

export interface ErrorMessage {
  type: "error";
  code: string;
  message: string;
}

export type ServerMessage = Welcome | StateMessage | ErrorMessage;

function isNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

function isVec(x: unknown, len: number): x is number[] {
  return Array.isArray(x) && x.length === len && x.every(isNumber);
}

function isState(x: unknown): x is GameState {
  if (typeof x !== "object" || x === null) return false;
  const s = x as Record<string, unknown>;
  if (!isNumber(s.step) || !isNumber(s.t) || typeof s.won !== "boolean") return false;
  if (!Array.isArray(s.active_cubes) || !s.active_cubes.every(isNumber)) return false;
  if (!Array.isArray(s.cubes) || !s.cubes.every((row) => isVec(row, 5))) return false;
  if (!Array.isArray(s.events)) return false;
  if (s.ball !== undefined) {
    const b = s.ball as Record<string, unknown>;
    if (!isVec(b.p, 3) || !isVec(b.q, 4) || !isVec(b.v, 3) || !isVec(b.w, 3)) return false;
  }
  return true;
}

function isWelcome(x: Record<string, unknown>): x is Welcome & Record<string, unknown> {
  if (x.proto !== PROTOCOL || typeof x.mode !== "string") return false;
  if (!isNumber(x.tick_hz) || !isNumber(x.fixed_dt)) return false;
  const scene = x.scene as Record<string, unknown> | undefined;
  if (typeof scene !== "object" || scene === null) return false;
  if (typeof scene.hash !== "string" || !isNumber(scene.table_half_extent)) return false;
  if (!Array.isArray(scene.cubes)) return false;
  for (const cube of scene.cubes) {
    const c = cube as Record<string, unknown>;
    if (!isNumber(c.id) || typeof c.name !== "string" || !isVec(c.p, 3)) return false;
  }
  return isState(x.state);
}

/** Parse one server frame; null means the frame was malformed. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;
  switch (msg.type) {
    case "welcome":
      return isWelcome(msg) ? (msg as unknown as Welcome) : null;
    case "state":
      return isState(msg) ? (msg as unknown as StateMessage) : null;
    case "error":
      if (typeof msg.code === "string" && typeof msg.message === "string") {
        return msg as unknown as ErrorMessage;
      }
      return null;
    default:
      return null;
  }
}

export function helloMessage(): string {
  return JSON.stringify({ type: "hello", proto: PROTOCOL });
}

export function inputMessage(h: number, v: number): string {
  return JSON.stringify({ type: "input", h, v });
}

export function restartMessage(): string {
  return JSON.stringify({ type: "restart" });
}

export function modeMessage(mode: string): string {
  return JSON.stringify({ type: "mode", mode });
}
