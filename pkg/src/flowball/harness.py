"""Deterministic replay: input traces in, trajectory records out.

An input trace is JSON-lines, one record per step that has input::

    {"step": 12, "h": 1.0, "v": -0.25}

Steps not listed sample as (0, 0); values clamp to [-1, 1]. Step numbers are
0-based and index the step about to be simulated.

A trajectory is JSON-lines with a header line::

    {"format": "traj/1", "fixed_dt": 0.02, "scene_hash": "sha256:...", "mode": "graph"}

followed by one record per completed step (1-based; step k has t = k * dt)
holding the ball state, the surviving cube ids and orientations, and the
step's discrete events. Identical scene + trace + step count always produces
byte-identical trajectory text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .errors import FlowballError, RuntimeFault
from .mathcore import Orientation, Rotator, compose, geodesic_degrees, rotator_to_orientation
from .physics import PhysicsConfig, step as physics_step
from .scene import (
    AxisSample,
    Scene,
    dispatch_frame_events,
    dispatch_overlap_events,
    dispatch_start_events,
)
from .scenefile import load_scene, load_scene_document

TRAJECTORY_FORMAT = "traj/1"


class InputTrace:
    """Sparse per-step input samples, clamped to the unit box."""

    def __init__(self, samples: Optional[dict[int, tuple[float, float]]] = None):
        self._samples: dict[int, AxisSample] = {}
        for step, (h, v) in (samples or {}).items():
            self.set(step, h, v)

    def set(self, step: int, h: float, v: float) -> None:
        if step < 0:
            raise FlowballError(f"trace step must be >= 0, got {step}")
        self._samples[int(step)] = AxisSample.clamped(float(h), float(v))

    def sample(self, step: int) -> AxisSample:
        return self._samples.get(step, AxisSample(0.0, 0.0))

    def __len__(self) -> int:
        return len(self._samples)

    def last_step(self) -> int:
        return max(self._samples) if self._samples else -1

    @classmethod
    def from_jsonl(cls, text: str) -> "InputTrace":
        trace = cls()
        for line_no, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FlowballError(f"trace line {line_no}: not valid JSON: {exc}") from exc
            if not isinstance(rec, dict) or set(rec) != {"step", "h", "v"}:
                raise FlowballError(f"trace line {line_no}: expected step/h/v fields")
            step = rec["step"]
            if not isinstance(step, int) or isinstance(step, bool) or step < 0:
                raise FlowballError(f"trace line {line_no}: bad step {step!r}")
            if step in trace._samples:
                raise FlowballError(f"trace line {line_no}: duplicate step {step}")
            trace.set(step, rec["h"], rec["v"])
        return trace

    @classmethod
    def load(cls, path: Union[str, Path]) -> "InputTrace":
        return cls.from_jsonl(Path(path).read_text(encoding="utf-8"))

    def to_jsonl(self) -> str:
        lines = [
            json.dumps({"step": step, "h": s.h, "v": s.v})
            for step, s in sorted(self._samples.items())
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    def write(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")


@dataclass(slots=True)
class Trajectory:
    header: dict[str, Any]
    records: list[dict[str, Any]] = field(default_factory=list)

    @property
    def won(self) -> bool:
        return any(
            event["kind"] == "win" for rec in self.records for event in rec["events"]
        )

    def removal_steps(self) -> dict[int, int]:
        """Map of removed cube actor id to the step it disappeared on."""
        out: dict[int, int] = {}
        for rec in self.records:
            for event in rec["events"]:
                if event["kind"] == "removed":
                    out[event["actor"]] = rec["step"]
        return out

    def overlap_count(self) -> int:
        return sum(
            1 for rec in self.records for event in rec["events"] if event["kind"] == "overlap"
        )

    def to_jsonl(self) -> str:
        lines = [json.dumps(self.header)]
        lines.extend(json.dumps(rec) for rec in self.records)
        return "\n".join(lines) + "\n"

    def write(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")

    @classmethod
    def from_jsonl(cls, text: str) -> "Trajectory":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise FlowballError("empty trajectory")
        header = json.loads(lines[0])
        if header.get("format") != TRAJECTORY_FORMAT:
            raise FlowballError(f"not a {TRAJECTORY_FORMAT} trajectory")
        return cls(header, [json.loads(line) for line in lines[1:]])

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Trajectory":
        return cls.from_jsonl(Path(path).read_text(encoding="utf-8"))


def _ball_actor(scene: Scene):
    for actor in scene.actors:
        if actor.body is not None:
            return actor
    return None


def advance(scene: Scene, cfg: PhysicsConfig, axes: AxisSample) -> dict[str, Any]:
    """Run one full frame+physics step and return its trajectory record."""
    scene.journal.clear()
    scene.faults.clear()
    won_before = scene.won
    alive_before = {a.id for a in scene.actors if a.trigger is not None and a.active}

    dispatch_frame_events(scene, cfg.fixed_dt, axes)
    events = physics_step(scene, cfg)
    dispatch_overlap_events(scene, events)
    scene.flush_removals()
    if scene.faults:
        raise RuntimeFault(scene.step_index, [fault for _, fault in scene.faults])

    record_events: list[dict[str, Any]] = [
        {"kind": "overlap", "trigger": e.trigger_owner, "other": e.other} for e in events
    ]
    surviving = {a.id for a in scene.actors if a.trigger is not None and a.active}
    for actor_id in sorted(alive_before - surviving):
        record_events.append({"kind": "removed", "actor": actor_id})
    if not won_before and scene.won:
        record_events.append({"kind": "win"})

    record: dict[str, Any] = {
        "step": scene.step_index,
        "t": scene.step_index * cfg.fixed_dt,
        "active_cubes": sorted(surviving),
        "cubes": [
            [a.id, *a.transform.orientation.as_tuple()]
            for a in scene.actors
            if a.trigger is not None and a.active
        ],
        "events": record_events,
    }
    ball = _ball_actor(scene)
    if ball is not None:
        record["ball"] = {
            "p": list(ball.transform.position.as_tuple()),
            "q": list(ball.transform.orientation.as_tuple()),
            "v": list(ball.body.velocity.as_tuple()),
            "w": list(ball.body.angular_velocity.as_tuple()),
        }
    return record


def _build(scene_source, mode: str, base_dir) -> Scene:
    if isinstance(scene_source, Scene):
        return scene_source
    if isinstance(scene_source, dict):
        return load_scene_document(scene_source, mode=mode, base_dir=base_dir)
    return load_scene(scene_source, mode=mode)


def run(
    scene_source: Union[str, Path, dict, Scene],
    mode: str,
    trace: InputTrace,
    steps: int,
    *,
    base_dir: Optional[Union[str, Path]] = None,
    config: Optional[PhysicsConfig] = None,
) -> Trajectory:
    """Simulate ``steps`` fixed steps of the scene under the given trace."""
    scene = _build(scene_source, mode, base_dir)
    cfg = config or scene.physics or PhysicsConfig()
    header = {
        "format": TRAJECTORY_FORMAT,
        "fixed_dt": cfg.fixed_dt,
        "scene_hash": scene.source_hash,
        "mode": scene.mode,
    }
    trajectory = Trajectory(header)
    dispatch_start_events(scene)
    for i in range(steps):
        record = advance(scene, cfg, trace.sample(i))
        trajectory.records.append(record)
    return trajectory


# -- equivalence --------------------------------------------------------------

_BALL_FIELDS = ("p", "q", "v", "w")


@dataclass(slots=True)
class Divergence:
    step: int
    field: str
    value_a: Any
    value_b: Any
    abs_diff: Optional[float] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "step": self.step,
            "field": self.field,
            "a": self.value_a,
            "b": self.value_b,
            "abs_diff": self.abs_diff,
        }


@dataclass(slots=True)
class EquivalenceReport:
    equivalent: bool
    steps: int
    tolerance: float
    max_abs_diff: float
    first_divergence: Optional[Divergence]
    removal_steps_a: dict[int, int]
    removal_steps_b: dict[int, int]

    def to_dict(self) -> dict[str, Any]:
        return {
            "equivalent": self.equivalent,
            "steps": self.steps,
            "tolerance": self.tolerance,
            "max_abs_diff": self.max_abs_diff,
            "first_divergence": (
                self.first_divergence.to_dict() if self.first_divergence else None
            ),
            "removal_steps": {
                "graph": {str(k): v for k, v in sorted(self.removal_steps_a.items())},
                "script": {str(k): v for k, v in sorted(self.removal_steps_b.items())},
            },
        }


def compare_trajectories(
    a: Trajectory, b: Trajectory, tolerance: float = 1e-12
) -> EquivalenceReport:
    """Componentwise comparison of two runs of the same scene and trace."""
    max_diff = 0.0
    first: Optional[Divergence] = None

    def note(step: int, name: str, va, vb, diff: Optional[float]) -> None:
        nonlocal first
        if first is None:
            first = Divergence(step, name, va, vb, diff)

    def numeric(step: int, name: str, va: float, vb: float) -> None:
        nonlocal max_diff
        diff = abs(va - vb)
        if diff > max_diff:
            max_diff = diff
        if diff > tolerance:
            note(step, name, va, vb, diff)

    for rec_a, rec_b in zip(a.records, b.records):
        step = rec_a["step"]
        if rec_b["step"] != step:
            note(step, "step", step, rec_b["step"], None)
            break
        numeric(step, "t", rec_a["t"], rec_b["t"])
        ball_a, ball_b = rec_a.get("ball"), rec_b.get("ball")
        if (ball_a is None) != (ball_b is None):
            note(step, "ball", ball_a, ball_b, None)
        elif ball_a is not None:
            for name in _BALL_FIELDS:
                for axis_index, (va, vb) in enumerate(zip(ball_a[name], ball_b[name])):
                    numeric(step, f"ball.{name}[{axis_index}]", va, vb)
        if rec_a["active_cubes"] != rec_b["active_cubes"]:
            note(step, "active_cubes", rec_a["active_cubes"], rec_b["active_cubes"], None)
        else:
            for cube_a, cube_b in zip(rec_a["cubes"], rec_b["cubes"]):
                if cube_a[0] != cube_b[0]:
                    note(step, "cubes", cube_a[0], cube_b[0], None)
                    continue
                for component, (va, vb) in enumerate(zip(cube_a[1:], cube_b[1:])):
                    numeric(step, f"cube[{cube_a[0]}].q[{component}]", va, vb)
        if rec_a["events"] != rec_b["events"]:
            note(step, "events", rec_a["events"], rec_b["events"], None)

    if len(a.records) != len(b.records):
        step = min(len(a.records), len(b.records)) + 1
        note(step, "length", len(a.records), len(b.records), None)

    removals_a = a.removal_steps()
    removals_b = b.removal_steps()
    if removals_a != removals_b and first is None:
        note(0, "removal_steps", removals_a, removals_b, None)

    return EquivalenceReport(
        equivalent=first is None,
        steps=len(a.records),
        tolerance=tolerance,
        max_abs_diff=max_diff,
        first_divergence=first,
        removal_steps_a=removals_a,
        removal_steps_b=removals_b,
    )


def check_equivalence(
    scene_source: Union[str, Path, dict],
    trace: InputTrace,
    steps: int,
    *,
    tolerance: float = 1e-12,
    base_dir: Optional[Union[str, Path]] = None,
) -> EquivalenceReport:
    """Run the scene through both scripting paths and compare trajectories."""
    graph_run = run(scene_source, "graph", trace, steps, base_dir=base_dir)
    script_run = run(scene_source, "script", trace, steps, base_dir=base_dir)
    return compare_trajectories(graph_run, script_run, tolerance)


# -- frame rate experiment ----------------------------------------------------


@dataclass(slots=True)
class FramerateRow:
    rate_hz: float
    dt: float
    steps: int
    final_orientation: Orientation
    deviation_from_reference_deg: float = 0.0


@dataclass(slots=True)
class FramerateTable:
    rates: Rotator
    duration: float
    rows: list[FramerateRow]

    @property
    def reference(self) -> FramerateRow:
        return max(self.rows, key=lambda r: r.rate_hz)

    def row(self, rate_hz: float) -> FramerateRow:
        for r in self.rows:
            if r.rate_hz == rate_hz:
                return r
        raise KeyError(rate_hz)


def framerate_experiment(
    rates_hz: list[float], duration: float, spin_rates: Rotator
) -> FramerateTable:
    """Spin one actor for a fixed duration at several frame rates.

    Each row advances an orientation by ``spin_rates * dt`` per frame, exactly
    as the per-frame spin script does, and reports the final orientation plus
    its geodesic deviation from the highest-rate row.
    """
    rows: list[FramerateRow] = []
    for rate in rates_hz:
        dt = 1.0 / rate
        steps = round(duration * rate)
        q = Orientation.identity()
        delta = rotator_to_orientation(spin_rates.scale(dt))
        for _ in range(steps):
            q = compose(delta, q)
        rows.append(FramerateRow(rate_hz=rate, dt=dt, steps=steps, final_orientation=q))
    table = FramerateTable(spin_rates, duration, rows)
    ref = table.reference.final_orientation
    for row in rows:
        row.deviation_from_reference_deg = geodesic_degrees(row.final_orientation, ref)
    return table
