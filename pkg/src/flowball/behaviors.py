"""Native scripted behaviors: the event-callback twin of the graph path.

Each behavior implements the same hooks scene dispatch calls on graph scripts
(on_start / on_update / on_fixed_update / on_trigger_enter) and mutates state
through the same ActorHandle primitives, so a behavior and a graph encoding
the same logic produce identical trajectories.
"""

from __future__ import annotations

from typing import Optional

from .errors import SceneFormatError
from .mathcore import Rotator, Vec3
from .scene import ActorHandle, AxisSample, DriveMode

PICKUP_TAG = "Pick Up"


class Behavior:
    """Base class: every hook is a no-op."""

    def on_start(self, handle: ActorHandle) -> None:
        pass

    def on_update(self, handle: ActorHandle, dt: float, axes: AxisSample) -> None:
        pass

    def on_fixed_update(self, handle: ActorHandle, dt: float, axes: AxisSample) -> None:
        pass

    def on_trigger_enter(self, handle: ActorHandle, other: ActorHandle) -> None:
        pass


class RotatorBehavior(Behavior):
    """Spins the actor at fixed rates (degrees per second) every frame."""

    def __init__(self, rates: Rotator):
        self.rates = rates

    def on_update(self, handle: ActorHandle, dt: float, axes: AxisSample) -> None:
        handle.add_world_rotation(self.rates.scale(dt))


def deactivate_if_pickup(other: ActorHandle, tag: str = PICKUP_TAG) -> bool:
    """Hide the other actor when it carries the pickup tag."""
    if other.tag == tag:
        other.set_active(False)
        return True
    return False


class PlayerControllerBehavior(Behavior):
    """Drives the ball from the input axes and collects pickups on contact.

    In force mode the axes push the center of mass; in torque mode they spin
    the ball about the axes that roll it the same way (forward input rolls
    about +x, rightward input about -z).
    """

    def __init__(self, speed: float = 10.0, roll_torque: float = 50.0, pickup_tag: str = PICKUP_TAG):
        self.speed = speed
        self.roll_torque = roll_torque
        self.pickup_tag = pickup_tag

    def on_fixed_update(self, handle: ActorHandle, dt: float, axes: AxisSample) -> None:
        if handle.drive_mode is DriveMode.TORQUE:
            handle.add_torque(
                Vec3(self.roll_torque * axes.v, 0.0, -self.roll_torque * axes.h)
            )
        else:
            handle.add_force(Vec3(axes.h, 0.0, axes.v).scale(self.speed))

    def on_trigger_enter(self, handle: ActorHandle, other: ActorHandle) -> None:
        deactivate_if_pickup(other, self.pickup_tag)


class PickupBehavior(Behavior):
    """Standalone pickup collector for scenes that keep it off the controller."""

    def __init__(self, pickup_tag: str = PICKUP_TAG):
        self.pickup_tag = pickup_tag

    def on_trigger_enter(self, handle: ActorHandle, other: ActorHandle) -> None:
        deactivate_if_pickup(other, self.pickup_tag)


def make_behavior(name: str, params: Optional[dict] = None) -> Behavior:
    """Instantiate a registered behavior from scene-file parameters."""
    params = dict(params or {})
    try:
        if name == "rotator":
            rates = params.pop("rates")
            behavior = RotatorBehavior(Rotator(*(float(c) for c in rates)))
        elif name == "player_controller":
            behavior = PlayerControllerBehavior(
                speed=float(params.pop("speed", 10.0)),
                roll_torque=float(params.pop("roll_torque", 50.0)),
                pickup_tag=str(params.pop("pickup_tag", PICKUP_TAG)),
            )
        elif name == "pickup_on_ball":
            behavior = PickupBehavior(pickup_tag=str(params.pop("pickup_tag", PICKUP_TAG)))
        else:
            raise SceneFormatError("script.behavior", f"unknown behavior '{name}'")
    except KeyError as exc:
        raise SceneFormatError("script", f"behavior '{name}' is missing param {exc}") from exc
    if params:
        extra = ", ".join(sorted(params))
        raise SceneFormatError("script", f"behavior '{name}' got unknown params: {extra}")
    return behavior


BEHAVIOR_NAMES = ("rotator", "player_controller", "pickup_on_ball")
