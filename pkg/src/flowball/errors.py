"""Exception types shared across the engine."""

from __future__ import annotations


class FlowballError(Exception):
    """Base class for all engine errors."""


class UnknownActor(FlowballError):
    """An actor id was looked up after removal, or never existed."""

    def __init__(self, actor_id: int):
        super().__init__(f"unknown actor id {actor_id}")
        self.actor_id = actor_id


class InvalidConfig(FlowballError):
    """A scene or physics configuration value is out of range or inconsistent."""


class SceneFormatError(FlowballError):
    """A scene document failed schema validation.

    ``path`` points at the offending field, e.g. ``actors[3].script.rates``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationFailed(FlowballError):
    """A node graph attached to a scene has validation errors."""

    def __init__(self, source: str, diagnostics):
        lines = "; ".join(str(d) for d in diagnostics)
        super().__init__(f"{source}: {lines}")
        self.source = source
        self.diagnostics = list(diagnostics)


class GraphRuntimeFault(FlowballError):
    """A graph firing hit a non-recoverable condition (bad payload, missing
    target). The firing is abandoned; the simulation step still completes."""

    def __init__(self, node_id: str, message: str):
        super().__init__(f"node '{node_id}': {message}")
        self.node_id = node_id


class RuntimeFault(FlowballError):
    """One or more graph firings faulted during a simulation step."""

    def __init__(self, step: int, faults):
        detail = "; ".join(str(f) for f in faults)
        super().__init__(f"step {step}: {detail}")
        self.step = step
        self.faults = list(faults)


class NumericalDivergence(FlowballError):
    """Integration produced a non-finite body state."""

    def __init__(self, step: int, detail: str):
        super().__init__(f"step {step}: {detail}")
        self.step = step
