"""Scene graph: actors, their components, and event dispatch.

A scene owns a flat list of actors in spawn order. Behavior scripts and
interpreted node graphs are both attached as "script objects" exposing the
same four hooks (on_start, on_update, on_fixed_update, on_trigger_enter), so
dispatch is identical no matter which scripting path is active. All state
mutation funnels through the scene's primitive operations, which also append
to a per-step journal used by tests and the replay harness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

from .errors import FlowballError, GraphRuntimeFault, UnknownActor
from .mathcore import Orientation, Rotator, Vec3, compose, rotator_to_orientation


class DriveMode(Enum):
    """How the player body turns input into motion.

    FORCE pushes the center of mass directly; TORQUE spins the ball and lets
    the rolling constraint derive the linear velocity from the spin.
    """

    FORCE = "force"
    TORQUE = "torque"


class AxisSample(NamedTuple):
    """One frame of input: horizontal (+x) and vertical (+z) axis values."""

    h: float
    v: float

    @classmethod
    def clamped(cls, h: float, v: float) -> "AxisSample":
        return cls(min(1.0, max(-1.0, h)), min(1.0, max(-1.0, v)))


ZERO_AXES = AxisSample(0.0, 0.0)


@dataclass(slots=True)
class Transform:
    position: Vec3
    orientation: Orientation


@dataclass(slots=True)
class RigidBody:
    """Dynamic state for a spherical body rolling on the ground plane."""

    mass: float
    radius: float
    drive_mode: DriveMode = DriveMode.FORCE
    velocity: Vec3 = field(default_factory=Vec3.zero)
    angular_velocity: Vec3 = field(default_factory=Vec3.zero)
    force: Vec3 = field(default_factory=Vec3.zero)
    torque: Vec3 = field(default_factory=Vec3.zero)


@dataclass(slots=True)
class TriggerVolume:
    """Axis-aligned box that reports overlaps instead of colliding."""

    half_extents: Vec3


@dataclass(slots=True)
class SolidVolume:
    """Axis-aligned box that blocks motion (the table rails)."""

    half_extents: Vec3


@dataclass(slots=True)
class Actor:
    id: int
    name: str
    tag: Optional[str]
    transform: Transform
    active: bool = True
    body: Optional[RigidBody] = None
    trigger: Optional[TriggerVolume] = None
    solid: Optional[SolidVolume] = None
    script: object = None
    script_label: str = ""
    pending_destroy: bool = False


class ActorHandle:
    """Narrow per-actor view handed to script hooks.

    Reads go straight to the actor; writes go through the scene primitives so
    both scripting paths mutate state through byte-identical code.
    """

    __slots__ = ("_scene", "id")

    def __init__(self, scene: "Scene", actor_id: int):
        self._scene = scene
        self.id = actor_id

    def _actor(self) -> Actor:
        return self._scene.get(self.id)

    @property
    def name(self) -> str:
        return self._actor().name

    @property
    def tag(self) -> Optional[str]:
        return self._actor().tag

    @property
    def active(self) -> bool:
        return self._actor().active

    @property
    def position(self) -> Vec3:
        return self._actor().transform.position

    @property
    def orientation(self) -> Orientation:
        return self._actor().transform.orientation

    @property
    def velocity(self) -> Vec3:
        body = self._actor().body
        return body.velocity if body else Vec3.zero()

    @property
    def drive_mode(self) -> Optional[DriveMode]:
        body = self._actor().body
        return body.drive_mode if body else None

    def add_world_rotation(self, delta: Rotator) -> None:
        self._scene.add_world_rotation(self.id, delta)

    def add_force(self, force: Vec3) -> None:
        self._scene.add_force(self.id, force)

    def add_torque(self, torque: Vec3) -> None:
        self._scene.add_torque(self.id, torque)

    def set_active(self, active: bool) -> None:
        self._scene.set_actor_active(self.id, active)

    def destroy(self) -> None:
        self._scene.destroy_actor(self.id)

    def __repr__(self) -> str:
        return f"ActorHandle({self.id})"


class Scene:
    """Actor container plus the journal and bookkeeping for one simulation."""

    def __init__(self, mode: str = "script"):
        self.actors: list[Actor] = []
        self._index: dict[int, Actor] = {}
        self._next_id = 1
        self.mode = mode
        self.step_index = 0
        self.elapsed = 0.0
        self.current_axes: AxisSample = ZERO_AXES
        # Persistent overlap set for rising-edge detection: (trigger_id, other_id).
        self.overlap_pairs: set[tuple[int, int]] = set()
        # Per-step record of mutations, in application order.
        self.journal: list[tuple] = []
        # Graph firings that faulted this step: (actor_id, GraphRuntimeFault).
        self.faults: list[tuple[int, GraphRuntimeFault]] = []
        self.initial_trigger_count = 0
        self.source_hash = ""
        # PhysicsConfig for this scene; filled in by the scene file loader.
        self.physics = None

    # -- construction -----------------------------------------------------

    def spawn(
        self,
        name: str,
        position: Vec3,
        *,
        tag: Optional[str] = None,
        orientation: Optional[Orientation] = None,
        body: Optional[RigidBody] = None,
        trigger: Optional[TriggerVolume] = None,
        solid: Optional[SolidVolume] = None,
    ) -> Actor:
        actor = Actor(
            id=self._next_id,
            name=name,
            tag=tag,
            transform=Transform(position, orientation or Orientation.identity()),
            body=body,
            trigger=trigger,
            solid=solid,
        )
        self._next_id += 1
        self.actors.append(actor)
        self._index[actor.id] = actor
        if trigger is not None:
            self.initial_trigger_count += 1
        return actor

    # -- lookup -----------------------------------------------------------

    def find(self, actor_id: int) -> Optional[Actor]:
        return self._index.get(actor_id)

    def get(self, actor_id: int) -> Actor:
        actor = self._index.get(actor_id)
        if actor is None:
            raise UnknownActor(actor_id)
        return actor

    def actor_named(self, name: str) -> Optional[Actor]:
        for actor in self.actors:
            if actor.name == name:
                return actor
        return None

    def handle(self, actor_id: int) -> ActorHandle:
        return ActorHandle(self, actor_id)

    def active_trigger_actors(self) -> list[Actor]:
        return [a for a in self.actors if a.trigger is not None and a.active]

    @property
    def won(self) -> bool:
        """All pickups gone, provided there was at least one to begin with."""
        if self.initial_trigger_count == 0:
            return False
        return not any(a.active for a in self.actors if a.trigger is not None)

    # -- mutation primitives ----------------------------------------------

    def add_world_rotation(self, actor_id: int, delta: Rotator) -> None:
        actor = self.get(actor_id)
        q = rotator_to_orientation(delta)
        actor.transform.orientation = compose(q, actor.transform.orientation)
        self.journal.append(("add_world_rotation", actor_id, delta.as_tuple()))

    def _body_of(self, actor_id: int) -> RigidBody:
        actor = self.get(actor_id)
        if actor.body is None:
            raise FlowballError(f"actor {actor_id} ({actor.name}) has no rigid body")
        return actor.body

    def add_force(self, actor_id: int, force: Vec3) -> None:
        body = self._body_of(actor_id)
        body.force = body.force + force
        self.journal.append(("add_force", actor_id, force.as_tuple()))

    def add_torque(self, actor_id: int, torque: Vec3) -> None:
        body = self._body_of(actor_id)
        body.torque = body.torque + torque
        self.journal.append(("add_torque", actor_id, torque.as_tuple()))

    def set_actor_active(self, actor_id: int, active: bool) -> None:
        actor = self.get(actor_id)
        actor.active = active
        self.journal.append(("set_active", actor_id, active))

    def destroy_actor(self, actor_id: int) -> None:
        """Mark for removal; the actor stays visible until flush_removals."""
        actor = self.get(actor_id)
        actor.pending_destroy = True
        self.journal.append(("destroy", actor_id))

    def flush_removals(self) -> list[int]:
        removed = [a.id for a in self.actors if a.pending_destroy]
        if removed:
            self.actors = [a for a in self.actors if not a.pending_destroy]
            for actor_id in removed:
                del self._index[actor_id]
                self.journal.append(("removed", actor_id))
        return removed


# -- event dispatch ---------------------------------------------------------


def _call_hook(scene: Scene, actor: Actor, hook_name: str, *args) -> None:
    hook = getattr(actor.script, hook_name, None)
    if hook is None:
        return
    try:
        hook(*args)
    except GraphRuntimeFault as fault:
        scene.faults.append((actor.id, fault))


def dispatch_start_events(scene: Scene) -> None:
    """Fire each scripted actor's on_start hook once, in spawn order."""
    for actor in list(scene.actors):
        if actor.script is not None and actor.active:
            _call_hook(scene, actor, "on_start", scene.handle(actor.id))


def dispatch_frame_events(scene: Scene, frame_dt: float, axes: AxisSample) -> None:
    """Per-frame phase: input axes and tick hooks, in actor spawn order."""
    scene.current_axes = axes
    for actor in list(scene.actors):
        if actor.script is not None and actor.active:
            _call_hook(scene, actor, "on_update", scene.handle(actor.id), frame_dt, axes)


def dispatch_fixed_events(scene: Scene, fixed_dt: float) -> None:
    """Fixed-step phase, fired by the physics stepper before integration."""
    for actor in list(scene.actors):
        if actor.script is not None and actor.active:
            _call_hook(
                scene, actor, "on_fixed_update", scene.handle(actor.id), fixed_dt, scene.current_axes
            )


def dispatch_overlap_events(scene: Scene, events) -> None:
    """Deliver begin-overlap events, trigger owner first, then the other actor.

    Actors destroyed earlier in the same step are still delivered to
    (destruction is deferred); deactivated actors are skipped.
    """
    for event in events:
        owner = scene.find(event.trigger_owner)
        other = scene.find(event.other)
        if owner is not None and other is not None and owner.active and owner.script is not None:
            _call_hook(
                scene, owner, "on_trigger_enter", scene.handle(owner.id), scene.handle(other.id)
            )
        if owner is not None and other is not None and other.active and other.script is not None:
            _call_hook(
                scene, other, "on_trigger_enter", scene.handle(other.id), scene.handle(owner.id)
            )
