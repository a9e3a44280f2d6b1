"""Regenerate tests/fixtures/session.jsonl from a live session service.

Run from the repository root with the flowball package installed:

    python3 frontend/tests/make_fixture.py

The capture connects to an in-process server, plays the opening of a real
game (roll forward until the first cube is picked up, then stop), and logs
every frame in both directions so the client tests replay genuine flow/1
traffic instead of hand-written samples.
"""

from __future__ import annotations

import json
from pathlib import Path

from starlette.testclient import TestClient

from flowball.service import create_app

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
SCENE = REPO_ROOT / "content" / "scenes" / "pool.scene"
OUT = Path(__file__).resolve().parent / "fixtures" / "session.jsonl"
MAX_FRAMES = 600


def main() -> None:
    app = create_app(SCENE, mode="script", tick_hz=250.0)
    log: list[dict] = []

    def send(ws, msg: dict) -> None:
        log.append({"dir": "send", "msg": msg})
        ws.send_text(json.dumps(msg))

    def recv(ws) -> dict:
        msg = json.loads(ws.receive_text())
        log.append({"dir": "recv", "msg": msg})
        return msg

    with TestClient(app) as client:
        with client.websocket_connect("/session") as ws:
            send(ws, {"type": "hello", "proto": "flow/1"})
            welcome = recv(ws)
            assert welcome["type"] == "welcome", welcome

            send(ws, {"type": "input", "h": 0.0, "v": 1.0})
            removed_at = None
            for _ in range(MAX_FRAMES):
                msg = recv(ws)
                if msg["type"] != "state":
                    raise SystemExit(f"unexpected frame: {msg}")
                if any(e.get("kind") == "removed" for e in msg["events"]):
                    removed_at = msg["step"]
                    break
            if removed_at is None:
                raise SystemExit("no cube removed within the frame budget")

            send(ws, {"type": "input", "h": 0.0, "v": 0.0})
            for _ in range(5):
                recv(ws)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", encoding="utf-8") as fh:
        for entry in log:
            fh.write(json.dumps(entry) + "\n")
    print(f"wrote {len(log)} frames to {OUT} (first pickup at step {removed_at})")


if __name__ == "__main__":
    main()
