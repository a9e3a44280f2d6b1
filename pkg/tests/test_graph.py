"""Node catalog, graph validation, and the pull-based interpreter."""

import pytest

from flowball.errors import GraphRuntimeFault
from flowball.graph import (
    CATALOG,
    EffectRecord,
    Graph,
    GraphScript,
    Node,
    Wire,
    fire_event,
    validate,
)
from flowball.graph.validate import (
    CROSS_EVENT_PAYLOAD,
    DATA_CYCLE,
    DUPLICATE_NODE_ID,
    EXEC_CYCLE,
    EXEC_FAN_OUT,
    EXEC_INTO_PURE,
    TYPE_MISMATCH,
    UNKNOWN_KIND,
    UNKNOWN_NODE,
    UNKNOWN_PIN,
    UNWIRED_INPUT,
)
from flowball.mathcore import Vec3
from flowball.scene import AxisSample, DriveMode, RigidBody, Scene, TriggerVolume


def codes(diags):
    return sorted(d.code for d in diags)


def graph_of(nodes, exec_wires=(), data_wires=(), name="G"):
    return Graph(
        name=name,
        nodes=list(nodes),
        exec_wires=[Wire(*w) for w in exec_wires],
        data_wires=[Wire(*w) for w in data_wires],
    )


def scene_with_ball(mode=DriveMode.FORCE):
    scene = Scene()
    ball = scene.spawn(
        "ball", Vec3(0.0, 0.5, 0.0), body=RigidBody(mass=1.0, radius=0.5, drive_mode=mode)
    )
    return scene, ball


# ------------------------------------------------------------- catalog


def test_catalog_is_closed_and_typed():
    expected = {
        "EventTick",
        "EventFixedTick",
        "EventInputAxis",
        "EventActorBeginOverlap",
        "ConstFloat",
        "ConstText",
        "ConstVector",
        "MultiplyFloat",
        "ScaleVector",
        "MakeVector",
        "MakeRotator",
        "CompareTag",
        "SelfActor",
        "AddWorldRotation",
        "AddTorque",
        "AddForce",
        "DestroyActor",
        "SetActorActive",
        "Branch",
    }
    assert set(CATALOG) == expected
    for name, spec in CATALOG.items():
        assert spec.name == name
        assert spec.category in ("event", "pure", "effect")


def test_events_carry_payload_outputs():
    assert CATALOG["EventTick"].data_out == {"DeltaSeconds": "Float"}
    assert CATALOG["EventInputAxis"].data_out == {"AxisValue": "Float"}
    assert CATALOG["EventActorBeginOverlap"].data_out == {"OtherActor": "Actor"}
    for kind in ("EventTick", "EventFixedTick", "EventInputAxis", "EventActorBeginOverlap"):
        assert CATALOG[kind].exec_out == ("out",)
        assert CATALOG[kind].exec_in == ()


def test_branch_has_two_exec_outs():
    assert CATALOG["Branch"].exec_out == ("true", "false")


def test_set_actor_active_defaults_false():
    spec = CATALOG["SetActorActive"].data_in["active"]
    assert spec.has_default and spec.default is False


# ------------------------------------------------------------ validation


def tick_rotation_nodes():
    """Minimal well-formed graph: tick delta scaled into a yaw rotation."""
    return [
        Node("tick", "EventTick"),
        Node("rate", "ConstFloat", {"value": 20.0}),
        Node("amount", "MultiplyFloat"),
        Node("delta", "MakeRotator"),
        Node("me", "SelfActor"),
        Node("spin", "AddWorldRotation"),
    ]


def tick_rotation_wires():
    exec_wires = [("tick", "out", "spin", "in")]
    data_wires = [
        ("tick", "DeltaSeconds", "amount", "a"),
        ("rate", "out", "amount", "b"),
        ("amount", "out", "delta", "yaw"),
        ("delta", "out", "spin", "delta"),
        ("me", "out", "spin", "target"),
    ]
    return exec_wires, data_wires


def test_validate_accepts_well_formed_graph():
    g = graph_of(tick_rotation_nodes(), *tick_rotation_wires())
    assert validate(g) == []


def test_duplicate_node_id():
    g = graph_of([Node("a", "ConstFloat", {"value": 1.0}), Node("a", "SelfActor")])
    assert DUPLICATE_NODE_ID in codes(validate(g))


def test_unknown_kind():
    g = graph_of([Node("a", "Frobulate")])
    assert codes(validate(g)) == [UNKNOWN_KIND]


def test_unknown_node_in_wire():
    g = graph_of(
        [Node("tick", "EventTick")],
        exec_wires=[("tick", "out", "ghost", "in")],
    )
    assert UNKNOWN_NODE in codes(validate(g))


def test_unknown_pin_in_wire():
    g = graph_of(
        [Node("a", "ConstFloat", {"value": 1.0}), Node("b", "MakeRotator")],
        data_wires=[("a", "out", "b", "twist")],
    )
    assert UNKNOWN_PIN in codes(validate(g))


def test_type_mismatch_on_data_wire():
    g = graph_of(
        [
            Node("tick", "EventTick"),
            Node("push", "AddForce"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[("tick", "out", "push", "in")],
        data_wires=[
            ("me", "out", "push", "target"),
            ("tick", "DeltaSeconds", "push", "force"),  # Float into Vector
        ],
    )
    assert TYPE_MISMATCH in codes(validate(g))


def test_data_wire_touching_exec_pin_is_type_mismatch():
    g = graph_of(
        [Node("tick", "EventTick"), Node("die", "DestroyActor"), Node("me", "SelfActor")],
        exec_wires=[("tick", "out", "die", "in")],
        data_wires=[
            ("me", "out", "die", "target"),
            ("tick", "out", "die", "in"),  # exec pins used as data endpoints
        ],
    )
    assert TYPE_MISMATCH in codes(validate(g))


def test_unwired_required_input():
    g = graph_of(
        [Node("tick", "EventTick"), Node("spin", "AddWorldRotation"), Node("me", "SelfActor")],
        exec_wires=[("tick", "out", "spin", "in")],
        data_wires=[("me", "out", "spin", "target")],  # delta left unwired
    )
    diags = validate(g)
    assert UNWIRED_INPUT in codes(diags)
    assert any(d.pin == "delta" for d in diags)


def test_unwired_input_with_default_is_fine():
    # SetActorActive.active defaults to False; MakeRotator pins default to 0.
    g = graph_of(
        [
            Node("overlap", "EventActorBeginOverlap"),
            Node("hide", "SetActorActive"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[("overlap", "out", "hide", "in")],
        data_wires=[("me", "out", "hide", "target")],
    )
    assert validate(g) == []


def test_exec_into_pure():
    g = graph_of(
        [Node("tick", "EventTick"), Node("amount", "MultiplyFloat")],
        exec_wires=[("tick", "out", "amount", "in")],
    )
    assert EXEC_INTO_PURE in codes(validate(g))


def test_exec_fan_out():
    g = graph_of(
        [
            Node("tick", "EventTick"),
            Node("d1", "DestroyActor"),
            Node("d2", "DestroyActor"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[("tick", "out", "d1", "in"), ("tick", "out", "d2", "in")],
        data_wires=[("me", "out", "d1", "target"), ("me", "out", "d2", "target")],
    )
    assert EXEC_FAN_OUT in codes(validate(g))


def test_exec_cycle():
    g = graph_of(
        [
            Node("tick", "EventTick"),
            Node("e1", "DestroyActor"),
            Node("e2", "DestroyActor"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[
            ("tick", "out", "e1", "in"),
            ("e1", "out", "e2", "in"),
            ("e2", "out", "e1", "in"),
        ],
        data_wires=[("me", "out", "e1", "target"), ("me", "out", "e2", "target")],
    )
    diags = codes(validate(g))
    assert EXEC_CYCLE in diags
    # e1 receives exec from both tick and e2.
    assert EXEC_FAN_OUT not in diags


def test_data_cycle():
    g = graph_of(
        [Node("a", "MultiplyFloat"), Node("b", "MultiplyFloat"), Node("c", "ConstFloat", {"value": 1.0})],
        data_wires=[
            ("a", "out", "b", "a"),
            ("b", "out", "a", "a"),
            ("c", "out", "a", "b"),
            ("c", "out", "b", "b"),
        ],
    )
    assert DATA_CYCLE in codes(validate(g))


def test_cross_event_payload():
    g = graph_of(
        [
            Node("tick", "EventTick"),
            Node("right", "EventInputAxis", {"axis_name": "MoveRight"}),
            Node("vec", "MakeVector"),
            Node("push", "AddForce"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[("right", "out", "push", "in")],
        data_wires=[
            ("tick", "DeltaSeconds", "vec", "x"),  # payload of a different event
            ("vec", "out", "push", "force"),
            ("me", "out", "push", "target"),
        ],
    )
    diags = validate(g)
    assert CROSS_EVENT_PAYLOAD in codes(diags)
    flagged = [d for d in diags if d.code == CROSS_EVENT_PAYLOAD]
    assert flagged[0].node == "push"


def test_same_event_payload_is_fine():
    g = graph_of(
        [
            Node("right", "EventInputAxis", {"axis_name": "MoveRight"}),
            Node("vec", "MakeVector"),
            Node("push", "AddForce"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[("right", "out", "push", "in")],
        data_wires=[
            ("right", "AxisValue", "vec", "x"),
            ("vec", "out", "push", "force"),
            ("me", "out", "push", "target"),
        ],
    )
    assert validate(g) == []


def test_param_type_checked():
    g = graph_of([Node("k", "ConstFloat", {"value": "not a number"})])
    assert TYPE_MISMATCH in codes(validate(g))


def test_missing_required_param():
    g = graph_of([Node("axis", "EventInputAxis")])
    assert UNWIRED_INPUT in codes(validate(g))


def test_diagnostic_str_format():
    g = graph_of([Node("a", "Frobulate")])
    text = str(validate(g)[0])
    assert "UnknownKind" in text and "a" in text


# ------------------------------------------------------------ interpreter


def test_fire_tick_applies_rotation():
    g = graph_of(tick_rotation_nodes(), *tick_rotation_wires())
    assert validate(g) == []
    scene = Scene()
    cube = scene.spawn("cube", Vec3.zero())
    effects = fire_event(g, g.node_by_id("tick"), {"DeltaSeconds": 0.02}, scene.handle(cube.id))
    assert effects == [EffectRecord("spin", "AddWorldRotation", cube.id)]
    assert scene.journal == [("add_world_rotation", cube.id, (0.0, 0.0, 0.4))]


def test_payload_reaches_effect():
    g = graph_of(
        [
            Node("right", "EventInputAxis", {"axis_name": "MoveRight"}),
            Node("speed", "ConstFloat", {"value": 10.0}),
            Node("scaled", "MultiplyFloat"),
            Node("vec", "MakeVector"),
            Node("push", "AddForce"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[("right", "out", "push", "in")],
        data_wires=[
            ("right", "AxisValue", "scaled", "a"),
            ("speed", "out", "scaled", "b"),
            ("scaled", "out", "vec", "x"),
            ("vec", "out", "push", "force"),
            ("me", "out", "push", "target"),
        ],
    )
    assert validate(g) == []
    scene, ball = scene_with_ball()
    fire_event(g, g.node_by_id("right"), {"AxisValue": 0.5}, scene.handle(ball.id))
    assert ball.body.force.as_tuple() == (5.0, 0.0, 0.0)


def test_branch_takes_condition_path():
    def build():
        return graph_of(
            [
                Node("overlap", "EventActorBeginOverlap"),
                Node("check", "CompareTag", {"tag": "Pick Up"}),
                Node("gate", "Branch"),
                Node("hide", "SetActorActive"),
            ],
            exec_wires=[("overlap", "out", "gate", "in"), ("gate", "true", "hide", "in")],
            data_wires=[
                ("overlap", "OtherActor", "check", "actor"),
                ("check", "out", "gate", "condition"),
                ("overlap", "OtherActor", "hide", "target"),
            ],
        )

    g = build()
    assert validate(g) == []
    scene = Scene()
    ball = scene.spawn("ball", Vec3.zero(), body=RigidBody(1.0, 0.5, DriveMode.FORCE))
    cube = scene.spawn("cube", Vec3.zero(), tag="Pick Up", trigger=TriggerVolume(Vec3(0.5, 0.5, 0.5)))
    wall = scene.spawn("wall", Vec3.zero(), tag="Rail")

    # Tagged actor: true path runs, target deactivated (active defaults False).
    effects = fire_event(
        g, g.node_by_id("overlap"), {"OtherActor": scene.handle(cube.id)}, scene.handle(ball.id)
    )
    assert effects == [EffectRecord("hide", "SetActorActive", cube.id)]
    assert not scene.get(cube.id).active

    # Untagged actor: false path has no wire, nothing happens.
    effects = fire_event(
        g, g.node_by_id("overlap"), {"OtherActor": scene.handle(wall.id)}, scene.handle(ball.id)
    )
    assert effects == []
    assert scene.get(wall.id).active


def test_branch_untaken_side_is_not_evaluated():
    # The false branch would fault (AddTorque on a bodiless actor); with the
    # condition true it must never run.
    g = graph_of(
        [
            Node("tick", "EventTick"),
            Node("gate", "Branch"),
            Node("cond", "CompareTag", {"tag": "cube"}),
            Node("me", "SelfActor"),
            Node("spin", "AddWorldRotation"),
            Node("delta", "MakeRotator"),
            Node("bad", "AddTorque"),
            Node("vec", "MakeVector"),
        ],
        exec_wires=[
            ("tick", "out", "gate", "in"),
            ("gate", "true", "spin", "in"),
            ("gate", "false", "bad", "in"),
        ],
        data_wires=[
            ("me", "out", "cond", "actor"),
            ("cond", "out", "gate", "condition"),
            ("me", "out", "spin", "target"),
            ("delta", "out", "spin", "delta"),
            ("me", "out", "bad", "target"),
            ("vec", "out", "bad", "torque"),
        ],
    )
    scene = Scene()
    cube = scene.spawn("cube", Vec3.zero(), tag="cube")
    effects = fire_event(g, g.node_by_id("tick"), {"DeltaSeconds": 0.02}, scene.handle(cube.id))
    assert [e.node_id for e in effects] == ["spin"]


def test_destroy_actor_defers_removal():
    g = graph_of(
        [Node("overlap", "EventActorBeginOverlap"), Node("die", "DestroyActor"), Node("me", "SelfActor")],
        exec_wires=[("overlap", "out", "die", "in")],
        data_wires=[("me", "out", "die", "target")],
    )
    scene = Scene()
    cube = scene.spawn("cube", Vec3.zero(), trigger=TriggerVolume(Vec3(0.5, 0.5, 0.5)))
    ball = scene.spawn("ball", Vec3.zero(), body=RigidBody(1.0, 0.5, DriveMode.FORCE))
    fire_event(
        g, g.node_by_id("overlap"), {"OtherActor": scene.handle(ball.id)}, scene.handle(cube.id)
    )
    assert scene.get(cube.id).pending_destroy
    assert scene.find(cube.id) is not None
    scene.flush_removals()
    assert scene.find(cube.id) is None


def test_pure_nodes_reevaluate_on_each_pull():
    # MakeVector feeds two AddForce effects chained by exec; the shared pure
    # subgraph is pulled twice and both effects see the same value.
    g = graph_of(
        [
            Node("tick", "EventTick"),
            Node("k", "ConstFloat", {"value": 3.0}),
            Node("vec", "MakeVector"),
            Node("p1", "AddForce"),
            Node("p2", "AddForce"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[("tick", "out", "p1", "in"), ("p1", "out", "p2", "in")],
        data_wires=[
            ("k", "out", "vec", "x"),
            ("vec", "out", "p1", "force"),
            ("vec", "out", "p2", "force"),
            ("me", "out", "p1", "target"),
            ("me", "out", "p2", "target"),
        ],
    )
    assert validate(g) == []
    scene, ball = scene_with_ball()
    effects = fire_event(g, g.node_by_id("tick"), {"DeltaSeconds": 0.02}, scene.handle(ball.id))
    assert [e.node_id for e in effects] == ["p1", "p2"]
    assert ball.body.force.x == 6.0


def test_effect_fault_carries_node_id():
    g = graph_of(
        [Node("tick", "EventTick"), Node("bad", "AddTorque"), Node("me", "SelfActor"), Node("vec", "MakeVector")],
        exec_wires=[("tick", "out", "bad", "in")],
        data_wires=[("me", "out", "bad", "target"), ("vec", "out", "bad", "torque")],
    )
    scene = Scene()
    cube = scene.spawn("cube", Vec3.zero())  # no rigid body
    with pytest.raises(GraphRuntimeFault) as info:
        fire_event(g, g.node_by_id("tick"), {"DeltaSeconds": 0.02}, scene.handle(cube.id))
    assert info.value.node_id == "bad"


def test_unwired_pin_without_default_faults_at_runtime():
    g = graph_of(
        [Node("tick", "EventTick"), Node("spin", "AddWorldRotation"), Node("me", "SelfActor")],
        exec_wires=[("tick", "out", "spin", "in")],
        data_wires=[("me", "out", "spin", "target")],
    )
    scene = Scene()
    cube = scene.spawn("cube", Vec3.zero())
    with pytest.raises(GraphRuntimeFault):
        fire_event(g, g.node_by_id("tick"), {"DeltaSeconds": 0.02}, scene.handle(cube.id))


def test_foreign_event_payload_faults_at_runtime():
    g = graph_of(
        [
            Node("tick", "EventTick"),
            Node("right", "EventInputAxis", {"axis_name": "MoveRight"}),
            Node("vec", "MakeVector"),
            Node("push", "AddForce"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[("right", "out", "push", "in")],
        data_wires=[
            ("tick", "DeltaSeconds", "vec", "x"),
            ("vec", "out", "push", "force"),
            ("me", "out", "push", "target"),
        ],
    )
    scene, ball = scene_with_ball()
    with pytest.raises(GraphRuntimeFault):
        fire_event(g, g.node_by_id("right"), {"AxisValue": 1.0}, scene.handle(ball.id))


def test_exec_loop_guard_faults_instead_of_spinning():
    g = graph_of(
        [
            Node("tick", "EventTick"),
            Node("e1", "SetActorActive"),
            Node("e2", "SetActorActive"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[
            ("tick", "out", "e1", "in"),
            ("e1", "out", "e2", "in"),
            ("e2", "out", "e1", "in"),
        ],
        data_wires=[("me", "out", "e1", "target"), ("me", "out", "e2", "target")],
    )
    scene = Scene()
    cube = scene.spawn("cube", Vec3.zero())
    with pytest.raises(GraphRuntimeFault):
        fire_event(g, g.node_by_id("tick"), {"DeltaSeconds": 0.02}, scene.handle(cube.id))


# ------------------------------------------------------------ GraphScript


def build_axis_force_graph():
    return graph_of(
        [
            Node("right", "EventInputAxis", {"axis_name": "MoveRight"}),
            Node("forward", "EventInputAxis", {"axis_name": "MoveForward"}),
            Node("speed", "ConstFloat", {"value": 10.0}),
            Node("sx", "MultiplyFloat"),
            Node("sz", "MultiplyFloat"),
            Node("vx", "MakeVector"),
            Node("vz", "MakeVector"),
            Node("px", "AddForce"),
            Node("pz", "AddForce"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[("right", "out", "px", "in"), ("forward", "out", "pz", "in")],
        data_wires=[
            ("right", "AxisValue", "sx", "a"),
            ("speed", "out", "sx", "b"),
            ("sx", "out", "vx", "x"),
            ("vx", "out", "px", "force"),
            ("me", "out", "px", "target"),
            ("forward", "AxisValue", "sz", "a"),
            ("speed", "out", "sz", "b"),
            ("sz", "out", "vz", "z"),
            ("vz", "out", "pz", "force"),
            ("me", "out", "pz", "target"),
        ],
        name="AxisForce",
    )


def test_graph_script_fires_axis_events_with_axes():
    g = build_axis_force_graph()
    assert validate(g) == []
    scene, ball = scene_with_ball()
    script = GraphScript(g)
    script.on_update(scene.handle(ball.id), 0.02, AxisSample(0.5, -1.0))
    assert ball.body.force.as_tuple() == (5.0, 0.0, -10.0)
    # Journal shows MoveRight fired before MoveForward.
    assert [entry[0] for entry in scene.journal] == ["add_force", "add_force"]
    assert scene.journal[0][2] == (5.0, 0.0, 0.0)


def test_graph_script_routes_overlap_events():
    g = graph_of(
        [Node("overlap", "EventActorBeginOverlap"), Node("die", "DestroyActor"), Node("me", "SelfActor")],
        exec_wires=[("overlap", "out", "die", "in")],
        data_wires=[("me", "out", "die", "target")],
    )
    scene = Scene()
    cube = scene.spawn("cube", Vec3.zero(), trigger=TriggerVolume(Vec3(0.5, 0.5, 0.5)))
    ball = scene.spawn("ball", Vec3.zero(), body=RigidBody(1.0, 0.5, DriveMode.FORCE))
    GraphScript(g).on_trigger_enter(scene.handle(cube.id), scene.handle(ball.id))
    assert scene.get(cube.id).pending_destroy


def test_graph_script_continues_after_fault_then_reraises():
    # Two tick events: the first faults, the second must still fire.
    g = graph_of(
        [
            Node("t1", "EventTick"),
            Node("t2", "EventTick"),
            Node("bad", "AddTorque"),
            Node("vec", "MakeVector"),
            Node("spin", "AddWorldRotation"),
            Node("delta", "MakeRotator"),
            Node("me", "SelfActor"),
        ],
        exec_wires=[("t1", "out", "bad", "in"), ("t2", "out", "spin", "in")],
        data_wires=[
            ("me", "out", "bad", "target"),
            ("vec", "out", "bad", "torque"),
            ("me", "out", "spin", "target"),
            ("delta", "out", "spin", "delta"),
        ],
    )
    scene = Scene()
    cube = scene.spawn("cube", Vec3.zero())
    with pytest.raises(GraphRuntimeFault) as info:
        GraphScript(g).on_update(scene.handle(cube.id), 0.02, AxisSample(0.0, 0.0))
    assert info.value.node_id == "bad"
    assert scene.journal == [("add_world_rotation", cube.id, (0.0, 0.0, 0.0))]


def test_graph_script_label_defaults_to_graph_name():
    g = build_axis_force_graph()
    assert GraphScript(g).label == "AxisForce"
    assert GraphScript(g, label="ball").label == "ball"
