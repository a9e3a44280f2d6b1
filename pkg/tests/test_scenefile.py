"""Scene documents: strict loading, config validation, dual-mode scripts."""

import json
import math

import pytest

from flowball.behaviors import PlayerControllerBehavior, RotatorBehavior
from flowball.errors import InvalidConfig, SceneFormatError, ValidationFailed
from flowball.graph import GraphScript
from flowball.scene import DriveMode
from flowball.scenefile import (
    SceneConfig,
    build_pool_scene,
    cube_positions,
    load_scene,
    load_scene_document,
    pool_document,
    scene_hash,
    validate_config,
)


def write_scene(tmp_path, doc, name="scene.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


# ------------------------------------------------------------- config


def test_default_config_is_valid():
    validate_config(SceneConfig())


@pytest.mark.parametrize(
    "kwargs",
    [
        {"fixed_dt": 0.0},
        {"fixed_dt": -0.02},
        {"ball_mass": 0.0},
        {"ball_radius": -1.0},
        {"rail_restitution": 1.5},
        {"rail_restitution": -0.1},
        {"ball_radius": 6.0},  # larger than the table half extent
        {"cube_circle_radius": 6.0},  # cube ring would cross the rails
        {"cube_count": -1},
    ],
)
def test_invalid_configs_rejected(kwargs):
    with pytest.raises(InvalidConfig):
        validate_config(SceneConfig(**kwargs))


def test_cube_ring_layout():
    cfg = SceneConfig()
    positions = cube_positions(cfg)
    assert len(positions) == 12
    for pos in positions:
        assert math.hypot(pos.x, pos.z) == pytest.approx(3.0)
        assert pos.y == 0.5
    # First cube sits straight ahead on +z; the ring is evenly spaced.
    assert positions[0].x == pytest.approx(0.0)
    assert positions[0].z == pytest.approx(3.0)
    angles = sorted(math.atan2(p.x, p.z) % (2 * math.pi) for p in positions)
    gaps = {round(b - a, 9) for a, b in zip(angles, angles[1:])}
    assert gaps == {round(2 * math.pi / 12, 9)}


# ----------------------------------------------------------- documents


def test_pool_document_shape():
    doc = pool_document()
    assert doc["format"] == "scene/1"
    kinds = [a["kind"] for a in doc["actors"]]
    assert kinds.count("ball") == 1
    assert kinds.count("cube") == 12
    assert kinds.count("rail") == 4
    cube = next(a for a in doc["actors"] if a["kind"] == "cube")
    assert cube["tag"] == "Pick Up"
    assert cube["script"]["behavior"] == "rotator"
    assert cube["script"]["graph"]


def test_scene_hash_is_stable_and_content_sensitive():
    a = pool_document()
    b = pool_document()
    assert scene_hash(a) == scene_hash(b)
    assert scene_hash(a).startswith("sha256:")
    moved = pool_document(ball_position=(1.0, 0.5, 0.0))
    assert scene_hash(moved) != scene_hash(a)


# ------------------------------------------------------------- loading


def test_load_scene_both_modes(scenes_dir):
    graph_scene = load_scene(scenes_dir / "pool.scene", mode="graph")
    script_scene = load_scene(scenes_dir / "pool.scene", mode="script")

    ball = graph_scene.actor_named("ball")
    assert isinstance(ball.script, GraphScript)
    cube = graph_scene.actor_named("cube_00")
    assert isinstance(cube.script, GraphScript)

    ball = script_scene.actor_named("ball")
    assert isinstance(ball.script, PlayerControllerBehavior)
    assert ball.script.speed == 10.0
    cube = script_scene.actor_named("cube_00")
    assert isinstance(cube.script, RotatorBehavior)

    # Same document, same hash, whatever the mode.
    assert graph_scene.source_hash == script_scene.source_hash
    assert graph_scene.mode == "graph"
    assert script_scene.mode == "script"


def test_loaded_scene_geometry(scenes_dir):
    scene = load_scene(scenes_dir / "pool.scene")
    ball = scene.actor_named("ball")
    assert ball.body is not None
    assert ball.body.radius == 0.5
    assert ball.body.drive_mode is DriveMode.FORCE
    cubes = [a for a in scene.actors if a.trigger is not None]
    assert len(cubes) == 12
    assert scene.initial_trigger_count == 12
    rails = [a for a in scene.actors if a.solid is not None]
    assert len(rails) == 4
    assert scene.physics is not None
    assert scene.physics.fixed_dt == 0.02


def test_torque_scene_drive_mode(scenes_dir):
    scene = load_scene(scenes_dir / "pool_torque.scene")
    assert scene.actor_named("ball").body.drive_mode is DriveMode.TORQUE


def test_graph_cache_shared_between_actors(scenes_dir):
    scene = load_scene(scenes_dir / "pool.scene", mode="graph")
    cubes = [a for a in scene.actors if a.name.startswith("cube_")]
    first = cubes[0].script.graph
    assert all(c.script.graph is first for c in cubes[1:])


def test_config_overrides_apply(tmp_path):
    doc = pool_document(config=SceneConfig(table_half_extent=8.0, rail_restitution=0.5))
    scene = load_scene_document(doc)
    assert scene.physics.table_half_extent == 8.0
    assert scene.physics.rail_restitution == 0.5


# ---------------------------------------------------- strict rejection


def reject(doc, match=None):
    with pytest.raises(SceneFormatError) as info:
        load_scene_document(doc)
    if match:
        assert match in str(info.value)
    return info.value


def test_rejects_unknown_top_level_key():
    doc = pool_document()
    doc["weather"] = "sunny"
    reject(doc, "weather")


def test_rejects_missing_format():
    doc = pool_document()
    del doc["format"]
    reject(doc)


def test_rejects_wrong_format_tag():
    doc = pool_document()
    doc["format"] = "scene/9"
    reject(doc)


def test_rejects_unknown_actor_key():
    doc = pool_document()
    doc["actors"][0]["mood"] = "bouncy"
    reject(doc, "mood")


def test_rejects_unknown_actor_kind():
    doc = pool_document()
    doc["actors"][0]["kind"] = "tetrahedron"
    reject(doc, "tetrahedron")


def test_rejects_unknown_config_key():
    doc = pool_document()
    doc["config"] = {"gravity": 9.8}
    reject(doc, "gravity")


def test_rejects_drive_mode_on_cube():
    doc = pool_document()
    cube = next(a for a in doc["actors"] if a["kind"] == "cube")
    cube["drive_mode"] = "force"
    reject(doc)


def test_rejects_bad_drive_mode_value():
    doc = pool_document()
    doc["actors"][0]["drive_mode"] = "warp"
    reject(doc)


def test_rejects_bad_position():
    doc = pool_document()
    doc["actors"][0]["position"] = [1.0, 2.0]
    reject(doc)


def test_rejects_unknown_script_key():
    doc = pool_document()
    doc["actors"][0]["script"]["shader"] = "toon"
    reject(doc)


def test_rejects_script_without_behavior_or_graph():
    doc = pool_document()
    doc["actors"][0]["script"] = {}
    reject(doc)


def test_rejects_duplicate_actor_names():
    doc = pool_document()
    doc["actors"][1]["name"] = "ball"
    reject(doc, "ball")


def test_mode_without_matching_script_runs_unscripted():
    # A script object may carry only one implementation; the other mode then
    # leaves that actor unscripted. The equivalence harness is what flags any
    # resulting behavioral gap.
    doc = pool_document(ball_graph=None, cube_graph=None)
    graph_scene = load_scene_document(doc, mode="graph")
    assert graph_scene.actor_named("ball").script is None
    script_scene = load_scene_document(doc, mode="script")
    assert isinstance(script_scene.actor_named("ball").script, PlayerControllerBehavior)


def test_bad_graph_reference_fails_validation(tmp_path):
    bad = tmp_path / "bad.fg"
    bad.write_text("graph G {\n  node a : Frobulate\n}\n")
    doc = pool_document(ball_graph="bad.fg", cube_graph=None)
    with pytest.raises(ValidationFailed):
        load_scene_document(doc, mode="graph", base_dir=tmp_path)


def test_missing_graph_file_reports_path(tmp_path):
    doc = pool_document(ball_graph="nowhere.fg", cube_graph=None)
    with pytest.raises((SceneFormatError, OSError)):
        load_scene_document(doc, mode="graph", base_dir=tmp_path)


# ------------------------------------------------------------ builders


def test_build_pool_scene_unscripted():
    scene = build_pool_scene()
    assert scene.actor_named("ball").script is None
    assert len(scene.actors) == 17
    assert scene.physics.table_half_extent == 5.0


def test_shipped_scene_corpus_loads(scenes_dir):
    paths = sorted(scenes_dir.glob("*.scene"))
    assert len(paths) >= 3
    for path in paths:
        for mode in ("script", "graph"):
            scene = load_scene(path, mode=mode)
            assert scene.actor_named("ball") is not None
