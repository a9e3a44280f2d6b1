"""flowball: a deterministic rolling-ball game engine with two interchangeable
scripting paths (dataflow node graphs and native behaviors) and a replay
harness that proves them equivalent."""

from .errors import (
    FlowballError,
    GraphRuntimeFault,
    InvalidConfig,
    NumericalDivergence,
    RuntimeFault,
    SceneFormatError,
    UnknownActor,
    ValidationFailed,
)
from .mathcore import Orientation, Rotator, Vec3, compose, rotator_to_orientation
from .physics import OverlapEvent, PhysicsConfig
from .scene import Actor, ActorHandle, AxisSample, DriveMode, RigidBody, Scene
from .harness import (
    EquivalenceReport,
    InputTrace,
    Trajectory,
    check_equivalence,
    run,
)
from .scenefile import SceneConfig, build_pool_scene, load_scene, pool_document

__version__ = "0.1.0"

__all__ = [
    "FlowballError",
    "GraphRuntimeFault",
    "InvalidConfig",
    "NumericalDivergence",
    "RuntimeFault",
    "SceneFormatError",
    "UnknownActor",
    "ValidationFailed",
    "Orientation",
    "Rotator",
    "Vec3",
    "compose",
    "rotator_to_orientation",
    "OverlapEvent",
    "PhysicsConfig",
    "Actor",
    "ActorHandle",
    "AxisSample",
    "DriveMode",
    "RigidBody",
    "Scene",
    "EquivalenceReport",
    "InputTrace",
    "Trajectory",
    "check_equivalence",
    "run",
    "SceneConfig",
    "build_pool_scene",
    "load_scene",
    "pool_document",
    "__version__",
]
