"""Scene documents: a JSON schema (``scene/1``) describing the table, the
ball, the pickup cubes, and which script each actor runs in each mode.

An actor's ``script`` field may be:

* absent, ``null``, or ``"none"``  - unscripted,
* ``"<behavior>"``                 - behavior only (e.g. ``"rotator"``),
* ``"<path>.fg"``                  - graph only,
* an object ``{"graph": ..., "behavior": ..., <params>}`` naming both paths,
  so the same scene can run in graph mode or script mode interchangeably.

Loading is strict: unknown keys anywhere raise SceneFormatError with the
offending path. Graph files are parsed and validated at load time; a bad
graph raises ValidationFailed before any simulation starts.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Optional, Union

from .behaviors import BEHAVIOR_NAMES, PICKUP_TAG, make_behavior
from .errors import InvalidConfig, SceneFormatError
from .graph.interp import GraphScript
from .graphlang import load_validated
from .mathcore import Vec3
from .physics import PhysicsConfig
from .scene import DriveMode, RigidBody, Scene, SolidVolume, TriggerVolume

SCENE_FORMAT = "scene/1"


@dataclass(frozen=True, slots=True)
class SceneConfig:
    """World tuning shared by the builders and the physics stepper."""

    fixed_dt: float = 0.02
    table_half_extent: float = 5.0
    rail_restitution: float = 1.0
    ball_radius: float = 0.5
    ball_mass: float = 1.0
    cube_half_extent: float = 0.5
    cube_circle_radius: float = 3.0
    cube_count: int = 12
    speed: float = 10.0
    roll_torque: float = 50.0

    def physics(self) -> PhysicsConfig:
        return PhysicsConfig(
            fixed_dt=self.fixed_dt,
            table_half_extent=self.table_half_extent,
            rail_restitution=self.rail_restitution,
        )


def validate_config(cfg: SceneConfig) -> None:
    """Reject configurations the table cannot physically host."""
    for name in (
        "fixed_dt",
        "table_half_extent",
        "ball_radius",
        "ball_mass",
        "cube_half_extent",
        "speed",
        "roll_torque",
    ):
        value = getattr(cfg, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise InvalidConfig(f"{name} must be a positive finite number, got {value!r}")
    if not (0.0 <= cfg.rail_restitution <= 1.0):
        raise InvalidConfig(f"rail_restitution must be in [0, 1], got {cfg.rail_restitution}")
    if cfg.cube_count < 0:
        raise InvalidConfig(f"cube_count must be >= 0, got {cfg.cube_count}")
    if cfg.cube_circle_radius < 0:
        raise InvalidConfig(f"cube_circle_radius must be >= 0, got {cfg.cube_circle_radius}")
    if cfg.ball_radius >= cfg.table_half_extent:
        raise InvalidConfig("ball does not fit between the rails")
    if cfg.cube_circle_radius > cfg.table_half_extent - cfg.cube_half_extent:
        raise InvalidConfig(
            f"cube circle radius {cfg.cube_circle_radius} does not fit inside the rails "
            f"(limit {cfg.table_half_extent - cfg.cube_half_extent})"
        )


def cube_positions(cfg: SceneConfig) -> list[Vec3]:
    """Evenly spaced ring of cube centers around the table origin."""
    out = []
    for i in range(cfg.cube_count):
        theta = 2.0 * math.pi * i / cfg.cube_count
        out.append(
            Vec3(
                cfg.cube_circle_radius * math.sin(theta),
                cfg.cube_half_extent,
                cfg.cube_circle_radius * math.cos(theta),
            )
        )
    return out


def _rail_specs(cfg: SceneConfig) -> list[tuple[str, Vec3, Vec3]]:
    h = cfg.table_half_extent
    thick = 0.1
    long_half = h + 2.0 * thick
    return [
        ("rail_east", Vec3(h + thick, 0.5, 0.0), Vec3(thick, 0.5, long_half)),
        ("rail_west", Vec3(-(h + thick), 0.5, 0.0), Vec3(thick, 0.5, long_half)),
        ("rail_north", Vec3(0.0, 0.5, h + thick), Vec3(long_half, 0.5, thick)),
        ("rail_south", Vec3(0.0, 0.5, -(h + thick)), Vec3(long_half, 0.5, thick)),
    ]


# -- document generation ------------------------------------------------------


def pool_document(
    *,
    name: str = "pool",
    drive_mode: str = "force",
    ball_graph: Optional[str] = "../graphs/ball_force.fg",
    cube_graph: Optional[str] = "../graphs/cube_full.fg",
    rotator_rates: tuple[float, float, float] = (0.0, 0.0, 20.0),
    ball_position: Optional[tuple[float, float, float]] = None,
    config: Optional[SceneConfig] = None,
) -> dict:
    """The standard table as a scene document, scripted for both modes."""
    cfg = config or SceneConfig()
    validate_config(cfg)
    overrides = {}
    defaults = SceneConfig()
    for f in fields(SceneConfig):
        value = getattr(cfg, f.name)
        if value != getattr(defaults, f.name):
            overrides[f.name] = value

    ball_script: dict[str, Any] = {
        "behavior": "player_controller",
        "speed": cfg.speed,
        "roll_torque": cfg.roll_torque,
    }
    if ball_graph:
        ball_script["graph"] = ball_graph
    cube_script: dict[str, Any] = {"behavior": "rotator", "rates": list(rotator_rates)}
    if cube_graph:
        cube_script["graph"] = cube_graph

    bp = ball_position or (0.0, cfg.ball_radius, 0.0)
    actors: list[dict] = [
        {
            "name": "ball",
            "kind": "ball",
            "position": list(bp),
            "drive_mode": drive_mode,
            "script": ball_script,
        }
    ]
    for i, pos in enumerate(cube_positions(cfg)):
        actors.append(
            {
                "name": f"cube_{i:02d}",
                "kind": "cube",
                "tag": PICKUP_TAG,
                "position": [pos.x, pos.y, pos.z],
                "script": dict(cube_script),
            }
        )
    for rail_name, pos, _half in _rail_specs(cfg):
        actors.append({"name": rail_name, "kind": "rail", "position": [pos.x, pos.y, pos.z]})

    doc: dict[str, Any] = {"format": SCENE_FORMAT, "name": name, "actors": actors}
    if overrides:
        doc["config"] = overrides
    return doc


def scene_hash(doc: dict) -> str:
    """Stable content hash of a scene document (mode-independent)."""
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return "sha256:" + hashlib.sha256(blob).hexdigest()


# -- document loading ---------------------------------------------------------


def _require_keys(doc: dict, allowed: set[str], required: set[str], path: str) -> None:
    for key in doc:
        if key not in allowed:
            raise SceneFormatError(path, f"unknown field '{key}'")
    for key in required:
        if key not in doc:
            raise SceneFormatError(path, f"missing field '{key}'")


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SceneFormatError(path, f"expected a number, got {value!r}")
    return float(value)


def _vec3(value: Any, path: str) -> Vec3:
    if not (isinstance(value, list) and len(value) == 3):
        raise SceneFormatError(path, "expected [x, y, z]")
    return Vec3(*(_number(c, path) for c in value))


def _parse_config(doc: dict, path: str) -> SceneConfig:
    cfg = SceneConfig()
    field_names = {f.name for f in fields(SceneConfig)}
    _require_keys(doc, field_names, set(), path)
    kwargs: dict[str, Any] = {}
    for key, value in doc.items():
        if key == "cube_count":
            if isinstance(value, bool) or not isinstance(value, int):
                raise SceneFormatError(f"{path}.{key}", "expected an integer")
            kwargs[key] = value
        else:
            kwargs[key] = _number(value, f"{path}.{key}")
    return replace(cfg, **kwargs)


@dataclass(slots=True)
class _ScriptSpec:
    graph_path: Optional[str] = None
    behavior: Optional[str] = None
    params: Optional[dict] = None


def _parse_script(value: Any, path: str) -> Optional[_ScriptSpec]:
    if value is None or value == "none":
        return None
    if isinstance(value, str):
        if value.endswith(".fg"):
            return _ScriptSpec(graph_path=value)
        if value in BEHAVIOR_NAMES:
            return _ScriptSpec(behavior=value)
        raise SceneFormatError(path, f"not a behavior name or .fg path: {value!r}")
    if isinstance(value, dict):
        spec = _ScriptSpec(params={})
        for key, item in value.items():
            if key == "graph":
                if not isinstance(item, str):
                    raise SceneFormatError(f"{path}.graph", "expected a path string")
                spec.graph_path = item
            elif key == "behavior":
                if not isinstance(item, str):
                    raise SceneFormatError(f"{path}.behavior", "expected a behavior name")
                spec.behavior = item
            else:
                spec.params[key] = item
        if spec.graph_path is None and spec.behavior is None:
            raise SceneFormatError(path, "script object needs 'graph' and/or 'behavior'")
        return spec
    raise SceneFormatError(path, f"bad script value: {value!r}")


def load_scene_document(
    doc: dict, mode: str = "script", base_dir: Optional[Union[str, Path]] = None
) -> Scene:
    """Build a runnable scene from a parsed document.

    ``mode`` picks the scripting path: ``"graph"`` attaches the graphs named
    by each actor's script field, ``"script"`` attaches the behaviors. Actors
    that name no script for the chosen mode run unscripted.
    """
    if mode not in ("graph", "script"):
        raise InvalidConfig(f"mode must be 'graph' or 'script', got {mode!r}")
    if not isinstance(doc, dict):
        raise SceneFormatError("$", "scene document must be an object")
    _require_keys(doc, {"format", "name", "config", "actors"}, {"format", "actors"}, "$")
    if doc["format"] != SCENE_FORMAT:
        raise SceneFormatError("$.format", f"expected {SCENE_FORMAT!r}, got {doc['format']!r}")
    cfg = _parse_config(doc.get("config", {}), "$.config")
    validate_config(cfg)
    base = Path(base_dir) if base_dir is not None else Path.cwd()

    scene = Scene(mode=mode)
    scene.physics = cfg.physics()
    scene.source_hash = scene_hash(doc)

    graph_cache: dict[str, Any] = {}

    def graph_script(rel_path: str) -> GraphScript:
        resolved = str((base / rel_path).resolve())
        if resolved not in graph_cache:
            graph_cache[resolved] = load_validated(resolved)
        return GraphScript(graph_cache[resolved], label=rel_path)

    actors = doc["actors"]
    if not isinstance(actors, list):
        raise SceneFormatError("$.actors", "expected a list")
    seen_names: set[str] = set()
    for i, actor_doc in enumerate(actors):
        path = f"$.actors[{i}]"
        if not isinstance(actor_doc, dict):
            raise SceneFormatError(path, "expected an object")
        _require_keys(
            actor_doc,
            {"name", "kind", "position", "tag", "drive_mode", "script"},
            {"name", "kind", "position"},
            path,
        )
        name = actor_doc["name"]
        if not isinstance(name, str) or not name:
            raise SceneFormatError(f"{path}.name", "expected a non-empty string")
        if name in seen_names:
            raise SceneFormatError(f"{path}.name", f"duplicate actor name {name!r}")
        seen_names.add(name)
        kind = actor_doc["kind"]
        position = _vec3(actor_doc["position"], f"{path}.position")
        tag = actor_doc.get("tag")
        if tag is not None and not isinstance(tag, str):
            raise SceneFormatError(f"{path}.tag", "expected a string or null")

        body = trigger = solid = None
        if kind == "ball":
            mode_name = actor_doc.get("drive_mode", "force")
            try:
                drive = DriveMode(mode_name)
            except ValueError:
                raise SceneFormatError(
                    f"{path}.drive_mode", f"expected 'force' or 'torque', got {mode_name!r}"
                ) from None
            body = RigidBody(mass=cfg.ball_mass, radius=cfg.ball_radius, drive_mode=drive)
        elif kind == "cube":
            half = cfg.cube_half_extent
            trigger = TriggerVolume(Vec3(half, half, half))
        elif kind == "rail":
            for rail_name, _pos, half_extents in _rail_specs(cfg):
                if rail_name == name:
                    solid = SolidVolume(half_extents)
                    break
            else:
                solid = SolidVolume(Vec3(0.1, 0.5, 0.1))
        else:
            raise SceneFormatError(f"{path}.kind", f"unknown actor kind {kind!r}")
        if "drive_mode" in actor_doc and kind != "ball":
            raise SceneFormatError(f"{path}.drive_mode", "only ball actors take a drive mode")

        actor = scene.spawn(
            name, position, tag=tag, body=body, trigger=trigger, solid=solid
        )

        spec = _parse_script(actor_doc.get("script"), f"{path}.script")
        if spec is None:
            continue
        if mode == "graph" and spec.graph_path is not None:
            actor.script = graph_script(spec.graph_path)
            actor.script_label = spec.graph_path
        elif mode == "script" and spec.behavior is not None:
            actor.script = make_behavior(spec.behavior, spec.params)
            actor.script_label = spec.behavior
    return scene


def load_scene(path: Union[str, Path], mode: str = "script") -> Scene:
    """Load a ``.scene`` JSON file; graph paths resolve relative to the file."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SceneFormatError("$", f"not valid JSON: {exc}") from exc
    return load_scene_document(doc, mode=mode, base_dir=path.parent)


def build_pool_scene(config: Optional[SceneConfig] = None) -> Scene:
    """The standard table with no scripts attached (physics-only)."""
    cfg = config or SceneConfig()
    doc = pool_document(ball_graph=None, cube_graph=None, config=cfg)
    for actor in doc["actors"]:
        actor.pop("script", None)
    return load_scene_document(doc, mode="script")
