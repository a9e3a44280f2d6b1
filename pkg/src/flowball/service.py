"""Interactive session service: one WebSocket connection drives one scene.

Wire protocol ``flow/1``, JSON text frames.

Client to server::

    {"type": "hello", "proto": "flow/1"}
    {"type": "input", "h": -1.0..1.0, "v": -1.0..1.0}   # sample-and-hold
    {"type": "restart"}
    {"type": "mode", "mode": "graph" | "script"}         # rebuild + restart

Server to client::

    {"type": "welcome", "proto": "flow/1", "mode": ..., "tick_hz": ...,
     "fixed_dt": ..., "scene": {...}, "state": {...}}    # after hello/restart/mode
    {"type": "state", "step": ..., "t": ..., "ball": {...},
     "active_cubes": [...], "cubes": [...], "events": [...], "won": ...}
    {"type": "error", "code": ..., "message": ...}

The simulation starts on hello and emits exactly one state per fixed step,
paced by wall clock at ``tick_hz`` steps per second (absolute deadlines, so a
slow frame does not skew the long-run rate). Input is held between messages
and sampled once per step, which makes a recorded session replayable: with
``record_dir`` set, the per-step samples are written as an input trace on
disconnect.

Malformed frames get an error reply and are dropped; after 10 of them the
connection is closed. Unknown message types get an error reply but do not
count against the limit.
"""

from __future__ import annotations

import asyncio
import json
from pathlib import Path
from typing import Any, Optional, Union

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from .errors import FlowballError
from .harness import InputTrace, advance
from .scene import AxisSample, Scene, dispatch_start_events
from .scenefile import load_scene, load_scene_document

PROTOCOL = "flow/1"
MAX_MALFORMED = 10

_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>flowball</title></head>
<body><h1>flowball session service</h1>
<p>No client bundle is installed. Connect a WebSocket client to
<code>/session</code> (protocol flow/1).</p></body></html>
"""


def _scene_summary(scene: Scene) -> dict[str, Any]:
    ball = next((a for a in scene.actors if a.body is not None), None)
    cubes = [
        {"id": a.id, "name": a.name, "p": list(a.transform.position.as_tuple())}
        for a in scene.actors
        if a.trigger is not None
    ]
    summary: dict[str, Any] = {
        "hash": scene.source_hash,
        "table_half_extent": scene.physics.table_half_extent if scene.physics else 5.0,
        "cubes": cubes,
    }
    if ball is not None:
        summary["ball"] = {
            "id": ball.id,
            "name": ball.name,
            "radius": ball.body.radius,
            "p": list(ball.transform.position.as_tuple()),
        }
        first_cube = next((a for a in scene.actors if a.trigger is not None), None)
        if first_cube is not None:
            summary["cube_half_extent"] = first_cube.trigger.half_extents.x
    return summary


def _initial_state(scene: Scene) -> dict[str, Any]:
    ball = next((a for a in scene.actors if a.body is not None), None)
    state: dict[str, Any] = {
        "step": 0,
        "t": 0.0,
        "active_cubes": sorted(
            a.id for a in scene.actors if a.trigger is not None and a.active
        ),
        "cubes": [
            [a.id, *a.transform.orientation.as_tuple()]
            for a in scene.actors
            if a.trigger is not None and a.active
        ],
        "events": [],
        "won": scene.won,
    }
    if ball is not None:
        state["ball"] = {
            "p": list(ball.transform.position.as_tuple()),
            "q": list(ball.transform.orientation.as_tuple()),
            "v": list(ball.body.velocity.as_tuple()),
            "w": list(ball.body.angular_velocity.as_tuple()),
        }
    return state


class Session:
    """Per-connection simulation state."""

    def __init__(self, build_scene, mode: str, tick_hz: float):
        self._build_scene = build_scene
        self.mode = mode
        self.tick_hz = tick_hz
        self.scene: Optional[Scene] = None
        self.held = AxisSample(0.0, 0.0)
        self.steps_taken = 0
        self.trace = InputTrace()
        self.malformed = 0
        self.started = False

    def start(self, mode: Optional[str] = None) -> None:
        if mode is not None:
            self.mode = mode
        self.scene = self._build_scene(self.mode)
        dispatch_start_events(self.scene)
        self.held = AxisSample(0.0, 0.0)
        self.steps_taken = 0
        self.trace = InputTrace()
        self.started = True

    def step_once(self) -> dict[str, Any]:
        if self.held.h != 0.0 or self.held.v != 0.0:
            self.trace.set(self.steps_taken, self.held.h, self.held.v)
        self.steps_taken += 1
        record = advance(self.scene, self.scene.physics, self.held)
        record["won"] = self.scene.won
        return record

    def welcome(self) -> dict[str, Any]:
        return {
            "type": "welcome",
            "proto": PROTOCOL,
            "mode": self.mode,
            "tick_hz": self.tick_hz,
            "fixed_dt": self.scene.physics.fixed_dt if self.scene.physics else 0.02,
            "scene": _scene_summary(self.scene),
            "state": _initial_state(self.scene),
        }


def create_app(
    scene_path: Union[str, Path, dict, None] = None,
    *,
    mode: str = "script",
    tick_hz: float = 50.0,
    record_dir: Optional[Union[str, Path]] = None,
    static_dir: Optional[Union[str, Path]] = None,
    base_dir: Optional[Union[str, Path]] = None,
) -> FastAPI:
    """Build the service app around one scene source."""
    app = FastAPI(title="flowball session service")
    app.state.session_count = 0

    def build_scene(run_mode: str) -> Scene:
        if isinstance(scene_path, dict):
            return load_scene_document(scene_path, mode=run_mode, base_dir=base_dir)
        return load_scene(scene_path, mode=run_mode)

    async def run_session(ws: WebSocket, session: Session) -> None:
        send_lock = asyncio.Lock()

        async def send(message: dict[str, Any]) -> None:
            async with send_lock:
                await ws.send_text(json.dumps(message))

        async def stepper() -> None:
            loop = asyncio.get_running_loop()
            period = 1.0 / session.tick_hz
            deadline = loop.time() + period
            while True:
                delay = deadline - loop.time()
                if delay > 0:
                    await asyncio.sleep(delay)
                deadline += period
                try:
                    record = session.step_once()
                except FlowballError as exc:
                    await send({"type": "error", "code": "fault", "message": str(exc)})
                    await ws.close(code=1011)
                    return
                await send({"type": "state", **record})

        stepper_task: Optional[asyncio.Task] = None
        try:
            while True:
                raw = await ws.receive_text()
                reply = _handle_message(session, raw)
                if reply is not None:
                    await send(reply)
                if session.malformed > MAX_MALFORMED:
                    await ws.close(code=1008)
                    return
                if session.started and stepper_task is None:
                    stepper_task = asyncio.create_task(stepper())
        finally:
            if stepper_task is not None:
                stepper_task.cancel()

    @app.websocket("/session")
    async def session_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        app.state.session_count += 1
        session_id = app.state.session_count
        session = Session(build_scene, mode, tick_hz)
        try:
            await run_session(ws, session)
        except WebSocketDisconnect:
            pass
        finally:
            if record_dir is not None and session.started:
                out_dir = Path(record_dir)
                out_dir.mkdir(parents=True, exist_ok=True)
                session.trace.write(out_dir / f"session-{session_id:04d}.jsonl")

    static = Path(static_dir) if static_dir else None
    if static is not None and static.is_dir():
        app.mount("/", StaticFiles(directory=str(static), html=True), name="client")
    else:

        @app.get("/")
        async def index() -> HTMLResponse:
            return HTMLResponse(_FALLBACK_PAGE)

    return app


def _handle_message(session: Session, raw: str) -> Optional[dict[str, Any]]:
    """Apply one client frame; returns the reply to send, if any."""

    def malformed(message: str) -> dict[str, Any]:
        session.malformed += 1
        return {"type": "error", "code": "bad-frame", "message": message}

    try:
        msg = json.loads(raw)
    except json.JSONDecodeError:
        return malformed("frame is not valid JSON")
    if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
        return malformed("frame must be an object with a 'type'")

    msg_type = msg["type"]
    if msg_type == "hello":
        if msg.get("proto") != PROTOCOL:
            return malformed(f"unsupported protocol, want {PROTOCOL!r}")
        if session.started:
            return {"type": "error", "code": "protocol", "message": "already started"}
        session.start()
        return session.welcome()

    if not session.started:
        return {"type": "error", "code": "protocol", "message": "hello required first"}

    if msg_type == "input":
        h, v = msg.get("h"), msg.get("v")
        if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in (h, v)):
            return malformed("input needs numeric 'h' and 'v'")
        session.held = AxisSample.clamped(float(h), float(v))
        return None
    if msg_type == "restart":
        session.start()
        return session.welcome()
    if msg_type == "mode":
        wanted = msg.get("mode")
        if wanted not in ("graph", "script"):
            return malformed("mode must be 'graph' or 'script'")
        session.start(mode=wanted)
        return session.welcome()
    return {"type": "error", "code": "unknown-type", "message": f"unknown type {msg_type!r}"}
