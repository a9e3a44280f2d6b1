#!/usr/bin/env python3
"""Regenerate the shipped scenes and input traces under content/.

Scenes come from the standard table builder; traces are either hand-shaped
(rail ram) or produced by a greedy chase controller that steers the ball
through every pickup cube. Outputs are committed, so reruns must be
byte-stable.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

from flowball.harness import InputTrace, advance
from flowball.scene import AxisSample
from flowball.scenefile import SceneConfig, load_scene_document, pool_document

ROOT = Path(__file__).resolve().parent.parent
SCENES = ROOT / "content" / "scenes"
TRACES = ROOT / "content" / "traces"


def write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(ROOT)}")


def make_scenes() -> None:
    write_json(SCENES / "pool.scene", pool_document(name="pool"))
    write_json(
        SCENES / "pool_torque.scene",
        pool_document(
            name="pool_torque", drive_mode="torque", ball_graph="../graphs/ball_torque.fg"
        ),
    )
    # Pickup handled on the ball side (Branch + CompareTag); cubes only spin.
    write_json(
        SCENES / "pool_branch.scene",
        pool_document(
            name="pool_branch",
            ball_graph="../graphs/ball_force_pickup.fg",
            cube_graph="../graphs/cube_rotator.fg",
        ),
    )
    # Ball starts in the clear lane above the cube ring (cubes reach |z| 3.5,
    # the ball's surface stays at |z| >= 3.7), so driving along x only ever
    # hits the rails.
    write_json(
        SCENES / "rails.scene",
        pool_document(name="rails", ball_position=(0.0, 0.5, 4.2)),
    )
    # Cubes spin on all three axes; pickup stays on the ball in both paths.
    write_json(
        SCENES / "spinners.scene",
        pool_document(
            name="spinners",
            ball_graph="../graphs/ball_force_pickup.fg",
            cube_graph="../graphs/spinner_xyz.fg",
            rotator_rates=(15.0, 30.0, 45.0),
        ),
    )


def make_ram_trace() -> None:
    # Short push east, then coast: the ball bounces between the east and west
    # rails with no input applied at any reflection.
    trace = InputTrace()
    for step in range(20):
        trace.set(step, 1.0, 0.0)
    trace.write(TRACES / "ram.jsonl")
    print(f"wrote {(TRACES / 'ram.jsonl').relative_to(ROOT)}")


def chase_all_cubes(doc: dict, *, cruise_speed: float, cap_steps: int) -> InputTrace:
    """Greedy controller: steer toward the nearest surviving cube until won."""
    scene = load_scene_document(doc, mode="script", base_dir=SCENES)
    cfg = scene.physics
    ball = next(a for a in scene.actors if a.body is not None)
    speed = 10.0  # must match the controller's force scale
    trace = InputTrace()
    for step in range(cap_steps):
        cubes = [a for a in scene.actors if a.trigger is not None and a.active]
        if not cubes:
            break
        pos = ball.transform.position
        target = min(
            cubes,
            key=lambda c: (c.transform.position.x - pos.x) ** 2
            + (c.transform.position.z - pos.z) ** 2,
        )
        dx = target.transform.position.x - pos.x
        dz = target.transform.position.z - pos.z
        dist = math.hypot(dx, dz) or 1.0
        want_vx = dx / dist * cruise_speed
        want_vz = dz / dist * cruise_speed
        vel = ball.body.velocity
        # One-step velocity matching, saturated to the input box.
        fx = (want_vx - vel.x) / cfg.fixed_dt * ball.body.mass
        fz = (want_vz - vel.z) / cfg.fixed_dt * ball.body.mass
        h = max(-1.0, min(1.0, fx / speed))
        v = max(-1.0, min(1.0, fz / speed))
        h = round(h, 4)
        v = round(v, 4)
        if h != 0.0 or v != 0.0:
            trace.set(step, h, v)
        advance(scene, cfg, AxisSample.clamped(h, v))
    if any(a.active for a in scene.actors if a.trigger is not None):
        raise SystemExit("chase controller failed to collect every cube")
    print(f"chase finished at step {scene.step_index}")
    return trace


def make_chase_traces() -> None:
    doc = pool_document(name="pool")
    sweep = chase_all_cubes(doc, cruise_speed=2.5, cap_steps=20000)
    sweep.write(TRACES / "sweep.jsonl")
    print(f"wrote {(TRACES / 'sweep.jsonl').relative_to(ROOT)}")

    # A 600-step slice of the same chase makes a good general-purpose demo.
    demo = InputTrace()
    for step in range(600):
        sample = sweep.sample(step)
        if sample.h != 0.0 or sample.v != 0.0:
            demo.set(step, sample.h, sample.v)
    demo.write(TRACES / "demo.jsonl")
    print(f"wrote {(TRACES / 'demo.jsonl').relative_to(ROOT)}")

    (TRACES / "idle.jsonl").write_text("", encoding="utf-8")
    print(f"wrote {(TRACES / 'idle.jsonl').relative_to(ROOT)}")


def main() -> int:
    SCENES.mkdir(parents=True, exist_ok=True)
    TRACES.mkdir(parents=True, exist_ok=True)
    make_scenes()
    make_ram_trace()
    make_chase_traces()
    return 0


if __name__ == "__main__":
    sys.exit(main())
