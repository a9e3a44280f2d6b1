import { describe, expect, it } from "vitest";

import { SessionClient } from "../src/client.js";
import { KeyTracker } from "../src/input.js";
import { FakeSocket, fixtureStates, loadFixture } from "./helpers.js";

const frames = loadFixture();

function connected(): { client: SessionClient; socket: FakeSocket } {
  const socket = new FakeSocket();
  const client = new SessionClient(socket);
  client.start();
  return { client, socket };
}

function replayServerFrames(client: SessionClient): void {
  for (const frame of frames) {
    if (frame.dir === "recv") client.handleFrame(JSON.stringify(frame.msg));
  }
}

describe("SessionClient", () => {
  it("opens with exactly one hello", () => {
    const { client, socket } = connected();
    expect(client.phase).toBe("connecting");
    expect(socket.sent).toEqual(['{"type":"hello","proto":"flow/1"}']);
  });

  it("enters playing on welcome and tracks the captured session", () => {
    const { client } = connected();
    replayServerFrames(client);
    expect(client.phase).toBe("playing");
    expect(client.welcome?.scene.cubes).toHaveLength(12);
    const last = fixtureStates(frames)[fixtureStates(frames).length - 1];
    expect(client.state?.step).toBe(last.step);
    expect(client.state?.active_cubes).toHaveLength(11);
  });

  it("saw the ball move while the forward key was held", () => {
    const states = fixtureStates(frames);
    const zs = states.map((s) => s.ball!.p[2]);
    expect(zs[zs.length - 1]).toBeGreaterThan(zs[0]);
    for (let i = 1; i < zs.length; i++) expect(zs[i]).toBeGreaterThanOrEqual(zs[i - 1]);
  });

  it("drops the remaining count when a cube is picked up", () => {
    const states = fixtureStates(frames);
    const counts = states.map((s) => s.active_cubes.length);
    expect(counts[0]).toBe(12);
    expect(counts[counts.length - 1]).toBe(11);
    const at = counts.findIndex((n) => n === 11);
    const removal = states[at];
    expect(removal.events.some((e) => e.kind === "removed")).toBe(true);
    // Active list and per-cube orientation rows always agree.
    for (const s of states) expect(s.cubes).toHaveLength(s.active_cubes.length);
  });

  it("flips to won when a state says so", () => {
    const { client } = connected();
    replayServerFrames(client);
    const last = client.state!;
    const winning = { ...last, type: "state", active_cubes: [], cubes: [], won: true };
    client.handleFrame(JSON.stringify(winning));
    expect(client.phase).toBe("won");
  });

  it("fails on a malformed frame", () => {
    const { client } = connected();
    client.handleFrame("not json");
    expect(client.phase).toBe("error");
    expect(client.errorText).toContain("malformed");
  });

  it("fails on a server fault", () => {
    const { client } = connected();
    client.handleFrame('{"type": "error", "code": "fault", "message": "graph fault"}');
    expect(client.phase).toBe("error");
    expect(client.errorText).toContain("fault");
  });

  it("ignores advisory unknown-type errors", () => {
    const { client } = connected();
    replayServerFrames(client);
    client.handleFrame('{"type": "error", "code": "unknown-type", "message": "unknown type"}');
    expect(client.phase).toBe("playing");
  });

  it("fails when the connection drops mid-game", () => {
    const { client } = connected();
    replayServerFrames(client);
    client.handleDisconnect();
    expect(client.phase).toBe("error");
  });

  it("sends at most one input frame per key-state change", () => {
    const { client, socket } = connected();
    const keys = new KeyTracker((h, v) => client.sendInput(h, v));

    keys.keyDown("ArrowRight");
    for (let i = 0; i < 10; i++) keys.keyDown("ArrowRight", true);
    keys.keyDown("ArrowLeft");
    keys.keyDown("ArrowUp");
    keys.keyUp("ArrowLeft");
    keys.keyUp("ArrowRight");
    keys.releaseAll();

    const inputs = socket.sent
      .map((raw) => JSON.parse(raw))
      .filter((msg) => msg.type === "input");
    // Six key-state changes above, of which every one moved the derived axes.
    expect(inputs).toEqual([
      { type: "input", h: 1, v: 0 },
      { type: "input", h: 0, v: 0 },
      { type: "input", h: 0, v: 1 },
      { type: "input", h: 1, v: 1 },
      { type: "input", h: 0, v: 1 },
      { type: "input", h: 0, v: 0 },
    ]);
    expect(client.sentLog.filter((raw) => JSON.parse(raw).type === "input")).toHaveLength(6);
  });

  it("logs opposing keys as a single h=0 input", () => {
    const { client, socket } = connected();
    const keys = new KeyTracker((h, v) => client.sendInput(h, v));
    keys.keyDown("ArrowRight");
    keys.keyDown("ArrowLeft");
    const inputs = socket.sent.map((raw) => JSON.parse(raw)).filter((m) => m.type === "input");
    expect(inputs[inputs.length - 1]).toEqual({ type: "input", h: 0, v: 0 });
  });
});
