"""Dataflow node graphs: model, static validation, and interpreter."""

from .model import CATALOG, Graph, Node, NodeKind, Wire
from .validate import ValidateDiagnostic, validate
from .interp import EffectRecord, GraphScript, fire_event

__all__ = [
    "CATALOG",
    "Graph",
    "Node",
    "NodeKind",
    "Wire",
    "ValidateDiagnostic",
    "validate",
    "EffectRecord",
    "GraphScript",
    "fire_event",
]
