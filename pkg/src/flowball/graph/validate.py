"""Static validation for node graphs.

Checks are structural and type-level; a graph with zero error diagnostics is
safe to interpret (runtime faults can still occur, e.g. acting on a destroyed
actor). Diagnostic codes:

* ``DuplicateNodeId``  - two nodes share an id
* ``UnknownKind``      - node kind not in the catalog
* ``UnknownNode``      - wire endpoint names an undeclared node
* ``UnknownPin``       - wire endpoint names a pin the kind does not have
* ``TypeMismatch``     - data wire connects pins of different value types,
                         or multiple wires feed one data-in
* ``UnwiredInput``     - required data-in (or param) left unconnected
* ``ExecIntoPure``     - exec wire terminates at a node with no exec-in
* ``ExecFanOut``       - one exec-out pin drives more than one wire
* ``ExecCycle``        - exec wires form a cycle
* ``DataCycle``        - data wires form a cycle
* ``CrossEventPayload``- an effect reachable from one event pulls another
                         event's payload
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import CATALOG, EFFECT, EVENT, Graph, Node, PURE, Wire

DUPLICATE_NODE_ID = "DuplicateNodeId"
UNKNOWN_KIND = "UnknownKind"
UNKNOWN_NODE = "UnknownNode"
UNKNOWN_PIN = "UnknownPin"
TYPE_MISMATCH = "TypeMismatch"
UNWIRED_INPUT = "UnwiredInput"
EXEC_INTO_PURE = "ExecIntoPure"
EXEC_FAN_OUT = "ExecFanOut"
EXEC_CYCLE = "ExecCycle"
DATA_CYCLE = "DataCycle"
CROSS_EVENT_PAYLOAD = "CrossEventPayload"


@dataclass(frozen=True, slots=True)
class ValidateDiagnostic:
    code: str
    message: str
    node: Optional[str] = None
    pin: Optional[str] = None

    def __str__(self) -> str:
        where = ""
        if self.node is not None:
            where = f" [{self.node}{'.' + self.pin if self.pin else ''}]"
        return f"{self.code}{where}: {self.message}"


def _param_type_ok(expected: str, value) -> bool:
    if expected == "Float":
        return isinstance(value, float) and not isinstance(value, bool)
    if expected == "Text":
        return isinstance(value, str)
    if expected == "Bool":
        return isinstance(value, bool)
    if expected == "Vector":
        return (
            isinstance(value, tuple)
            and len(value) == 3
            and all(isinstance(c, float) for c in value)
        )
    return False


def validate(graph: Graph) -> list[ValidateDiagnostic]:
    diags: list[ValidateDiagnostic] = []

    seen: dict[str, Node] = {}
    known: dict[str, Node] = {}
    for node in graph.nodes:
        if node.id in seen:
            diags.append(
                ValidateDiagnostic(
                    DUPLICATE_NODE_ID, f"node id '{node.id}' declared more than once", node.id
                )
            )
            continue
        seen[node.id] = node
        spec = CATALOG.get(node.kind)
        if spec is None:
            diags.append(
                ValidateDiagnostic(UNKNOWN_KIND, f"no such node kind '{node.kind}'", node.id)
            )
            continue
        known[node.id] = node
        for pname, pspec in spec.params.items():
            if pname not in node.params:
                if pspec.required:
                    diags.append(
                        ValidateDiagnostic(
                            UNWIRED_INPUT,
                            f"missing required param '{pname}'",
                            node.id,
                            pname,
                        )
                    )
            elif not _param_type_ok(pspec.type, node.params[pname]):
                diags.append(
                    ValidateDiagnostic(
                        TYPE_MISMATCH,
                        f"param '{pname}' expects {pspec.type}",
                        node.id,
                        pname,
                    )
                )
        for pname in node.params:
            if pname not in spec.params:
                diags.append(
                    ValidateDiagnostic(
                        UNKNOWN_PIN, f"kind {node.kind} has no param '{pname}'", node.id, pname
                    )
                )

    def endpoint_ok(wire: Wire, node_id: str) -> bool:
        if node_id in known:
            return True
        if node_id not in seen:
            diags.append(
                ValidateDiagnostic(UNKNOWN_NODE, f"wire references undeclared node '{node_id}'")
            )
        # Unknown-kind nodes already got their own diagnostic.
        return False

    # Exec wire shape.
    exec_ok: list[Wire] = []
    for wire in graph.exec_wires:
        if not (endpoint_ok(wire, wire.src_node) and endpoint_ok(wire, wire.dst_node)):
            continue
        src_spec = known[wire.src_node].spec
        dst_spec = known[wire.dst_node].spec
        if wire.src_pin not in src_spec.exec_out:
            diags.append(
                ValidateDiagnostic(
                    UNKNOWN_PIN,
                    f"kind {src_spec.name} has no exec-out pin '{wire.src_pin}'",
                    wire.src_node,
                    wire.src_pin,
                )
            )
            continue
        if dst_spec.category in (PURE,) or (dst_spec.category == EVENT):
            diags.append(
                ValidateDiagnostic(
                    EXEC_INTO_PURE,
                    f"exec wire into {dst_spec.category} node of kind {dst_spec.name}",
                    wire.dst_node,
                    wire.dst_pin,
                )
            )
            continue
        if wire.dst_pin not in dst_spec.exec_in:
            diags.append(
                ValidateDiagnostic(
                    UNKNOWN_PIN,
                    f"kind {dst_spec.name} has no exec-in pin '{wire.dst_pin}'",
                    wire.dst_node,
                    wire.dst_pin,
                )
            )
            continue
        exec_ok.append(wire)

    # One driven wire per exec-out pin.
    fanout: dict[tuple[str, str], int] = {}
    for wire in exec_ok:
        fanout[(wire.src_node, wire.src_pin)] = fanout.get((wire.src_node, wire.src_pin), 0) + 1
    for (node_id, pin), count in sorted(fanout.items()):
        if count > 1:
            diags.append(
                ValidateDiagnostic(
                    EXEC_FAN_OUT,
                    f"exec-out pin drives {count} wires; at most one allowed",
                    node_id,
                    pin,
                )
            )

    # Data wire shape and types.
    data_ok: list[Wire] = []
    fed: dict[tuple[str, str], int] = {}
    for wire in graph.data_wires:
        if not (endpoint_ok(wire, wire.src_node) and endpoint_ok(wire, wire.dst_node)):
            continue
        src_spec = known[wire.src_node].spec
        dst_spec = known[wire.dst_node].spec
        if wire.src_pin not in src_spec.data_out:
            if wire.src_pin in src_spec.exec_out:
                diags.append(
                    ValidateDiagnostic(
                        TYPE_MISMATCH,
                        "data wire from an exec pin",
                        wire.src_node,
                        wire.src_pin,
                    )
                )
            else:
                diags.append(
                    ValidateDiagnostic(
                        UNKNOWN_PIN,
                        f"kind {src_spec.name} has no data-out pin '{wire.src_pin}'",
                        wire.src_node,
                        wire.src_pin,
                    )
                )
            continue
        if wire.dst_pin not in dst_spec.data_in:
            if wire.dst_pin in dst_spec.exec_in:
                diags.append(
                    ValidateDiagnostic(
                        TYPE_MISMATCH,
                        "data wire into an exec pin",
                        wire.dst_node,
                        wire.dst_pin,
                    )
                )
            else:
                diags.append(
                    ValidateDiagnostic(
                        UNKNOWN_PIN,
                        f"kind {dst_spec.name} has no data-in pin '{wire.dst_pin}'",
                        wire.dst_node,
                        wire.dst_pin,
                    )
                )
            continue
        src_type = src_spec.data_out[wire.src_pin]
        dst_type = dst_spec.data_in[wire.dst_pin].type
        if src_type != dst_type:
            diags.append(
                ValidateDiagnostic(
                    TYPE_MISMATCH,
                    f"{src_type} output wired into {dst_type} input",
                    wire.dst_node,
                    wire.dst_pin,
                )
            )
            continue
        fed[(wire.dst_node, wire.dst_pin)] = fed.get((wire.dst_node, wire.dst_pin), 0) + 1
        data_ok.append(wire)

    for (node_id, pin), count in sorted(fed.items()):
        if count > 1:
            diags.append(
                ValidateDiagnostic(
                    TYPE_MISMATCH,
                    f"data-in pin fed by {count} wires; exactly one allowed",
                    node_id,
                    pin,
                )
            )

    # Required data-in pins must be wired (unless the catalog gives a default).
    for node_id, node in known.items():
        spec = node.spec
        for pin, pin_spec in spec.data_in.items():
            if pin_spec.has_default:
                continue
            if (node_id, pin) not in fed:
                diags.append(
                    ValidateDiagnostic(
                        UNWIRED_INPUT, f"data-in pin '{pin}' is not wired", node_id, pin
                    )
                )

    # Cycles.
    def find_cycle(edges: dict[str, list[str]]) -> Optional[str]:
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {nid: 0 for nid in known}
        stack_hit: list[Optional[str]] = [None]

        def visit(nid: str) -> bool:
            color[nid] = GRAY
            for nxt in edges.get(nid, ()):
                if color.get(nxt, BLACK) == GRAY:
                    stack_hit[0] = nxt
                    return True
                if color.get(nxt, BLACK) == WHITE and visit(nxt):
                    return True
            color[nid] = BLACK
            return False

        for nid in sorted(known):
            if color[nid] == WHITE and visit(nid):
                return stack_hit[0]
        return None

    exec_edges: dict[str, list[str]] = {}
    for wire in exec_ok:
        exec_edges.setdefault(wire.src_node, []).append(wire.dst_node)
    exec_cycle_at = find_cycle(exec_edges)
    if exec_cycle_at is not None:
        diags.append(ValidateDiagnostic(EXEC_CYCLE, "exec wires form a cycle", exec_cycle_at))

    data_edges: dict[str, list[str]] = {}
    for wire in data_ok:
        data_edges.setdefault(wire.src_node, []).append(wire.dst_node)
    data_cycle_at = find_cycle(data_edges)
    if data_cycle_at is not None:
        diags.append(ValidateDiagnostic(DATA_CYCLE, "data wires form a cycle", data_cycle_at))

    # Cross-event payload reachability. For each exec node, collect the events
    # that can trigger it and the event payloads its data closure pulls.
    if exec_cycle_at is None and data_cycle_at is None:
        triggers: dict[str, set[str]] = {nid: set() for nid in known}
        for node_id, node in known.items():
            if node.spec.category != EVENT:
                continue
            frontier = [node_id]
            while frontier:
                cur = frontier.pop()
                for nxt in exec_edges.get(cur, ()):
                    if node_id not in triggers[nxt]:
                        triggers[nxt].add(node_id)
                        frontier.append(nxt)

        incoming: dict[str, list[Wire]] = {}
        for wire in data_ok:
            incoming.setdefault(wire.dst_node, []).append(wire)

        def payload_sources(start: str) -> set[str]:
            """Event nodes whose payload feeds ``start``'s data closure."""
            out: set[str] = set()
            seen_nodes: set[str] = set()
            frontier = [start]
            while frontier:
                cur = frontier.pop()
                if cur in seen_nodes:
                    continue
                seen_nodes.add(cur)
                for wire in incoming.get(cur, ()):
                    src = known[wire.src_node]
                    if src.spec.category == EVENT:
                        out.add(src.id)
                    else:
                        frontier.append(wire.src_node)
            return out

        for node_id in sorted(known):
            node = known[node_id]
            if node.spec.category != EFFECT:
                continue
            events = triggers[node_id]
            if not events:
                continue
            for payload_event in sorted(payload_sources(node_id)):
                if events != {payload_event}:
                    diags.append(
                        ValidateDiagnostic(
                            CROSS_EVENT_PAYLOAD,
                            f"pulls payload of '{payload_event}' but is executed by "
                            f"{sorted(events)}",
                            node_id,
                        )
                    )

    return diags
