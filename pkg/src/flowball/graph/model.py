"""Node graph data model and the closed node catalog.

A graph is a set of nodes plus two wire lists. Exec wires order side effects;
data wires feed values. Node kinds come from a fixed catalog: event sources,
pure value nodes, and effect nodes. Unknown kinds are representable (so the
validator can reject them) but never executable.

Value types on pins: Float, Text, Bool, Vector, Rotator, Actor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

FLOAT = "Float"
TEXT = "Text"
BOOL = "Bool"
VECTOR = "Vector"
ROTATOR = "Rotator"
ACTOR = "Actor"

EVENT = "event"
PURE = "pure"
EFFECT = "effect"


@dataclass(frozen=True, slots=True)
class ParamSpec:
    """A literal constructor argument on a node declaration."""

    type: str
    required: bool = True
    default: Any = None


@dataclass(frozen=True, slots=True)
class PinSpec:
    """A data-in pin; ``default`` (when not None) makes wiring optional."""

    type: str
    default: Any = None
    has_default: bool = False


@dataclass(frozen=True, slots=True)
class NodeKind:
    name: str
    category: str
    params: dict[str, ParamSpec] = field(default_factory=dict)
    data_in: dict[str, PinSpec] = field(default_factory=dict)
    data_out: dict[str, str] = field(default_factory=dict)
    exec_in: tuple[str, ...] = ()
    exec_out: tuple[str, ...] = ()


def _event(name: str, payload: dict[str, str], params: dict[str, ParamSpec] | None = None) -> NodeKind:
    return NodeKind(
        name=name,
        category=EVENT,
        params=params or {},
        data_out=payload,
        exec_out=("out",),
    )


def _pure(name: str, ins: dict[str, PinSpec], outs: dict[str, str], params=None) -> NodeKind:
    return NodeKind(name=name, category=PURE, params=params or {}, data_in=ins, data_out=outs)


def _effect(name: str, ins: dict[str, PinSpec], exec_out: tuple[str, ...] = ("out",)) -> NodeKind:
    return NodeKind(name=name, category=EFFECT, data_in=ins, exec_in=("in",), exec_out=exec_out)


def _opt_float() -> PinSpec:
    return PinSpec(FLOAT, default=0.0, has_default=True)


CATALOG: dict[str, NodeKind] = {
    kind.name: kind
    for kind in [
        _event("EventTick", {"DeltaSeconds": FLOAT}),
        _event("EventFixedTick", {"DeltaSeconds": FLOAT}),
        _event(
            "EventInputAxis",
            {"AxisValue": FLOAT},
            params={"axis_name": ParamSpec(TEXT)},
        ),
        _event("EventActorBeginOverlap", {"OtherActor": ACTOR}),
        _pure("ConstFloat", {}, {"out": FLOAT}, params={"value": ParamSpec(FLOAT)}),
        _pure("ConstText", {}, {"out": TEXT}, params={"value": ParamSpec(TEXT)}),
        _pure("ConstVector", {}, {"out": VECTOR}, params={"value": ParamSpec(VECTOR)}),
        _pure("MultiplyFloat", {"a": PinSpec(FLOAT), "b": PinSpec(FLOAT)}, {"out": FLOAT}),
        _pure("ScaleVector", {"v": PinSpec(VECTOR), "s": PinSpec(FLOAT)}, {"out": VECTOR}),
        _pure("MakeVector", {"x": _opt_float(), "y": _opt_float(), "z": _opt_float()}, {"out": VECTOR}),
        _pure(
            "MakeRotator",
            {"roll": _opt_float(), "pitch": _opt_float(), "yaw": _opt_float()},
            {"out": ROTATOR},
        ),
        _pure("CompareTag", {"actor": PinSpec(ACTOR)}, {"out": BOOL}, params={"tag": ParamSpec(TEXT)}),
        _pure("SelfActor", {}, {"out": ACTOR}),
        _effect(
            "AddWorldRotation",
            {"target": PinSpec(ACTOR), "delta": PinSpec(ROTATOR)},
        ),
        _effect("AddTorque", {"target": PinSpec(ACTOR), "torque": PinSpec(VECTOR)}),
        _effect("AddForce", {"target": PinSpec(ACTOR), "force": PinSpec(VECTOR)}),
        _effect("DestroyActor", {"target": PinSpec(ACTOR)}),
        _effect(
            "SetActorActive",
            {
                "target": PinSpec(ACTOR),
                # No boolean constant node exists, so the common case is baked
                # in as a pin default; a wired Bool overrides it.
                "active": PinSpec(BOOL, default=False, has_default=True),
            },
        ),
        _effect("Branch", {"condition": PinSpec(BOOL)}, exec_out=("true", "false")),
    ]
}

EVENT_KINDS = tuple(k for k, spec in CATALOG.items() if spec.category == EVENT)


@dataclass(slots=True)
class Node:
    id: str
    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def spec(self) -> Optional[NodeKind]:
        return CATALOG.get(self.kind)


@dataclass(frozen=True, slots=True)
class Wire:
    src_node: str
    src_pin: str
    dst_node: str
    dst_pin: str

    def sort_key(self) -> tuple[str, str, str, str]:
        return (self.src_node, self.src_pin, self.dst_node, self.dst_pin)


@dataclass(slots=True)
class Graph:
    name: str
    nodes: list[Node] = field(default_factory=list)
    exec_wires: list[Wire] = field(default_factory=list)
    data_wires: list[Wire] = field(default_factory=list)

    def node_by_id(self, node_id: str) -> Optional[Node]:
        for node in self.nodes:
            if node.id == node_id:
                return node
        return None

    def events_of(self, kind: str, axis_name: Optional[str] = None) -> list[Node]:
        """Event nodes of the given kind, in declaration order.

        For EventInputAxis, ``axis_name`` filters on the node's parameter.
        """
        out = []
        for node in self.nodes:
            if node.kind != kind:
                continue
            if axis_name is not None and node.params.get("axis_name") != axis_name:
                continue
            out.append(node)
        return out

    def data_wire_into(self, node_id: str, pin: str) -> Optional[Wire]:
        for wire in self.data_wires:
            if wire.dst_node == node_id and wire.dst_pin == pin:
                return wire
        return None

    def exec_wire_from(self, node_id: str, pin: str) -> Optional[Wire]:
        for wire in self.exec_wires:
            if wire.src_node == node_id and wire.src_pin == pin:
                return wire
        return None
