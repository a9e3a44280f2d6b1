// flow/1 session client.
//
// Owns the connection phase and the latest server snapshot. Rendering is
// pull-based: the UI reads `welcome`/`state`/`phase` on every animation
// tick, so every drawn frame comes from exactly one state message and the
// client never predicts or interpolates between ticks.

import {
  GameState,
  ServerMessage,
  Welcome,
  helloMessage,
  inputMessage,
  modeMessage,
  parseServerMessage,
  restartMessage,
} from "./protocol.js";

export type Phase = "connecting" | "playing" | "won" | "error";

/** The slice of WebSocket the client needs; tests substitute a fake. */
export interface Socket {
  send(data: string): void;
  close(): void;
}

export class SessionClient {
  phase: Phase = "connecting";
  welcome: Welcome | null = null;
  state: GameState | null = null;
  errorText = "";
  /** Protocol log of every frame this client sent, in order. */
  sentLog: string[] = [];

  constructor(private socket: Socket) {}

  /** Call once the transport is open. */
  start(): void {
    this.sendRaw(helloMessage());
  }

  sendInput(h: number, v: number): void {
    this.sendRaw(inputMessage(h, v));
  }

  restart(): void {
    this.sendRaw(restartMessage());
  }

  setMode(mode: string): void {
    this.sendRaw(modeMessage(mode));
  }

  handleFrame(raw: string): void {
    const msg = parseServerMessage(raw);
    if (msg === null) {
      this.fail("malformed server frame");
      return;
    }
    this.handleMessage(msg);
  }

  handleDisconnect(): void {
    if (this.phase !== "error") this.fail("connection closed");
  }

  private handleMessage(msg: ServerMessage): void {
    switch (msg.type) {
      case "welcome":
        this.welcome = msg;
        this.applyState(msg.state);
        break;
      case "state":
        this.applyState(msg);
        break;
      case "error":
        if (msg.code === "fault" || msg.code === "protocol" || msg.code === "bad-frame") {
          this.fail(`server error ${msg.code}: ${msg.message}`);
        }
        break;
    }
  }

  private applyState(state: GameState): void {
    this.state = state;
    this.phase = state.won ? "won" : "playing";
  }

  private fail(text: string): void {
    this.phase = "error";
    this.errorText = text;
  }

  private sendRaw(data: string): void {
    this.sentLog.push(data);
    this.socket.send(data);
  }
}
