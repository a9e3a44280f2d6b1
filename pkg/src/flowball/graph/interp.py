"""Graph interpreter: fires event nodes and walks their exec chains.

Evaluation is lazy pull: when an effect executes, its data-in pins are
evaluated right then by walking wires backwards; pure nodes are re-evaluated
on every pull (no memoization), so evaluation order never changes results.
Effects run at most once per firing, in exec-wire order.

:class:`GraphScript` adapts a validated graph to the same hook interface
native behaviors implement, so scene dispatch cannot tell the two apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from ..errors import FlowballError, GraphRuntimeFault
from ..mathcore import Rotator, Vec3
from ..scene import ActorHandle, AxisSample
from .model import EVENT, Graph, Node


@dataclass(frozen=True, slots=True)
class EffectRecord:
    """One executed effect: which node ran and which actor it touched."""

    node_id: str
    kind: str
    target: Optional[int]


class _Firing:
    """Single event firing: the event node, its payload, and the owner."""

    def __init__(self, graph: Graph, event_node: Node, payload: dict[str, Any], owner: ActorHandle):
        self.graph = graph
        self.event_node = event_node
        self.payload = payload
        self.owner = owner
        self.effects: list[EffectRecord] = []
        self._executed: set[str] = set()

    # -- data evaluation ----------------------------------------------------

    def _pull(self, node: Node, pin: str) -> Any:
        """Value on a data-in pin: follow its wire, or fall back to a default."""
        wire = self.graph.data_wire_into(node.id, pin)
        if wire is None:
            pin_spec = node.spec.data_in[pin]
            if pin_spec.has_default:
                return pin_spec.default
            raise GraphRuntimeFault(node.id, f"data-in pin '{pin}' has no wire and no default")
        src = self.graph.node_by_id(wire.src_node)
        return self._output(src, wire.src_pin)

    def _output(self, node: Node, pin: str) -> Any:
        spec = node.spec
        if spec.category == EVENT:
            if node.id != self.event_node.id:
                raise GraphRuntimeFault(
                    node.id, "payload pulled outside this event's own firing"
                )
            return self.payload[pin]
        kind = node.kind
        if kind == "ConstFloat" or kind == "ConstText":
            return node.params["value"]
        if kind == "ConstVector":
            return Vec3(*node.params["value"])
        if kind == "MultiplyFloat":
            return self._pull(node, "a") * self._pull(node, "b")
        if kind == "ScaleVector":
            return self._pull(node, "v").scale(self._pull(node, "s"))
        if kind == "MakeVector":
            return Vec3(self._pull(node, "x"), self._pull(node, "y"), self._pull(node, "z"))
        if kind == "MakeRotator":
            return Rotator(
                self._pull(node, "roll"), self._pull(node, "pitch"), self._pull(node, "yaw")
            )
        if kind == "CompareTag":
            actor: ActorHandle = self._pull(node, "actor")
            return actor.tag == node.params["tag"]
        if kind == "SelfActor":
            return self.owner
        raise GraphRuntimeFault(node.id, f"kind {kind} has no value output")

    # -- exec chain ---------------------------------------------------------

    def run(self) -> list[EffectRecord]:
        wire = self.graph.exec_wire_from(self.event_node.id, "out")
        node = self.graph.node_by_id(wire.dst_node) if wire else None
        while node is not None:
            if node.id in self._executed:
                raise GraphRuntimeFault(node.id, "effect executed twice in one firing")
            self._executed.add(node.id)
            next_pin = "out"
            try:
                next_pin = self._execute(node)
            except GraphRuntimeFault:
                raise
            except (FlowballError, ValueError) as exc:
                # ValueError covers arithmetic that produced a non-finite value.
                raise GraphRuntimeFault(node.id, str(exc)) from exc
            wire = self.graph.exec_wire_from(node.id, next_pin)
            node = self.graph.node_by_id(wire.dst_node) if wire else None
        return self.effects

    def _execute(self, node: Node) -> str:
        """Run one effect node; returns the exec-out pin to follow."""
        kind = node.kind
        if kind == "Branch":
            condition = self._pull(node, "condition")
            return "true" if condition else "false"
        target: ActorHandle = self._pull(node, "target")
        if kind == "AddWorldRotation":
            target.add_world_rotation(self._pull(node, "delta"))
        elif kind == "AddTorque":
            target.add_torque(self._pull(node, "torque"))
        elif kind == "AddForce":
            target.add_force(self._pull(node, "force"))
        elif kind == "DestroyActor":
            target.destroy()
        elif kind == "SetActorActive":
            target.set_active(bool(self._pull(node, "active")))
        else:
            raise GraphRuntimeFault(node.id, f"kind {kind} is not executable")
        self.effects.append(EffectRecord(node.id, kind, target.id))
        return "out"


def fire_event(
    graph: Graph, event_node: Node, payload: dict[str, Any], owner: ActorHandle
) -> list[EffectRecord]:
    """Fire one event node and run its exec chain to completion."""
    return _Firing(graph, event_node, payload, owner).run()


class GraphScript:
    """Hook adapter: drives a validated graph from scene dispatch.

    Fires input-axis events (horizontal, then vertical), then tick events,
    every frame; fixed-tick events every physics step; begin-overlap events on
    trigger contact. A faulted firing is abandoned, remaining firings still
    run, and the first fault is re-raised for the dispatcher to record.
    """

    def __init__(self, graph: Graph, label: str = ""):
        self.graph = graph
        self.label = label or graph.name
        self._tick = graph.events_of("EventTick")
        self._fixed_tick = graph.events_of("EventFixedTick")
        self._move_right = graph.events_of("EventInputAxis", axis_name="MoveRight")
        self._move_forward = graph.events_of("EventInputAxis", axis_name="MoveForward")
        self._overlap = graph.events_of("EventActorBeginOverlap")

    def _fire_all(self, nodes, payloads, owner: ActorHandle) -> None:
        first_fault: Optional[GraphRuntimeFault] = None
        for node, payload in zip(nodes, payloads):
            try:
                fire_event(self.graph, node, payload, owner)
            except GraphRuntimeFault as fault:
                if first_fault is None:
                    first_fault = fault
        if first_fault is not None:
            raise first_fault

    def on_start(self, handle: ActorHandle) -> None:
        pass

    def on_update(self, handle: ActorHandle, dt: float, axes: AxisSample) -> None:
        nodes = self._move_right + self._move_forward + self._tick
        payloads = (
            [{"AxisValue": axes.h}] * len(self._move_right)
            + [{"AxisValue": axes.v}] * len(self._move_forward)
            + [{"DeltaSeconds": dt}] * len(self._tick)
        )
        self._fire_all(nodes, payloads, handle)

    def on_fixed_update(self, handle: ActorHandle, dt: float, axes: AxisSample) -> None:
        self._fire_all(self._fixed_tick, [{"DeltaSeconds": dt}] * len(self._fixed_tick), handle)

    def on_trigger_enter(self, handle: ActorHandle, other: ActorHandle) -> None:
        self._fire_all(self._overlap, [{"OtherActor": other}] * len(self._overlap), handle)
