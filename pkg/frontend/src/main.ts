// Browser entry point: wires the WebSocket, keyboard, and render loop.

import { SessionClient } from "./client.js";
import { KeyTracker } from "./input.js";
import { Renderer } from "./render.js";

const canvas = document.getElementById("table") as HTMLCanvasElement;
const status = document.getElementById("status") as HTMLElement;
const ctx = canvas.getContext("2d");
if (ctx === null) throw new Error("2d canvas unavailable");

const wsProto = location.protocol === "https:" ? "wss" : "ws";
const socket = new WebSocket(`${wsProto}://${location.host}/session`);
const client = new SessionClient(socket);
const renderer = new Renderer(ctx, canvas.width, canvas.height);
const keys = new KeyTracker((h, v) => client.sendInput(h, v));

socket.addEventListener("open", () => client.start());
socket.addEventListener("message", (ev) => client.handleFrame(String(ev.data)));
socket.addEventListener("close", () => client.handleDisconnect());
socket.addEventListener("error", () => client.handleDisconnect());

window.addEventListener("keydown", (ev) => {
  if (ev.code.startsWith("Arrow")) ev.preventDefault();
  if (ev.code === "KeyR") client.restart();
  keys.keyDown(ev.code, ev.repeat);
});
window.addEventListener("keyup", (ev) => keys.keyUp(ev.code));
window.addEventListener("blur", () => keys.releaseAll());

function statusLine(): string {
  switch (client.phase) {
    case "connecting":
      return "connecting…";
    case "error":
      return `error: ${client.errorText}`;
    default: {
      const w = client.welcome;
      const s = client.state;
      if (w === null || s === null) return "waiting for scene…";
      return `mode ${w.mode} · step ${s.step} · arrows roll the ball · R restarts`;
    }
  }
}

function frame(): void {
  if (client.welcome !== null && client.state !== null) {
    renderer.draw(client.welcome, client.state);
  }
  status.textContent = statusLine();
  requestAnimationFrame(frame);
}

requestAnimationFrame(frame);
