"""Fixed-timestep physics: semi-implicit Euler, rolling constraint, rail
reflection, and trigger overlap detection.

One call to :func:`step` advances the scene by exactly one fixed timestep:

1. fire fixed-step script hooks (they deposit forces and torques),
2. integrate rigid bodies (velocity first, then position),
3. resolve rail contacts by clamp-and-reflect,
4. detect rising-edge trigger overlaps,
5. clear force/torque accumulators.

Overlap events are returned to the caller, which dispatches them and then
flushes deferred destroys; that keeps "actor destroyed by an earlier event
this step" visible to later events in the same step.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NumericalDivergence
from .mathcore import Orientation, Vec3, compose, sphere_aabb_overlap
from .scene import Actor, DriveMode, Scene, dispatch_fixed_events

# Solid sphere moment of inertia factor: I = (2/5) m r^2.
_SPHERE_INERTIA_FACTOR = 0.4


@dataclass(frozen=True, slots=True)
class PhysicsConfig:
    fixed_dt: float = 0.02
    table_half_extent: float = 5.0
    rail_restitution: float = 1.0


@dataclass(frozen=True, slots=True)
class OverlapEvent:
    """Rising-edge overlap between a trigger volume and another actor."""

    trigger_owner: int
    other: int
    step_index: int


def rolling_velocity(angular_velocity: Vec3, radius: float) -> Vec3:
    """Linear velocity of a sphere rolling without slipping on the y=0 plane.

    v = r * (omega x n) with contact normal n = +y.
    """
    return Vec3(-radius * angular_velocity.z, 0.0, radius * angular_velocity.x)


def rolling_angular_velocity(velocity: Vec3, radius: float, spin_y: float) -> Vec3:
    """Inverse of :func:`rolling_velocity`; the free spin about +y is kept."""
    return Vec3(velocity.z / radius, spin_y, -velocity.x / radius)


def _integrate_body(actor: Actor, dt: float) -> None:
    body = actor.body
    inv_mass = 1.0 / body.mass
    accel = body.force.scale(inv_mass)
    body.velocity = body.velocity + accel.scale(dt)

    inertia = _SPHERE_INERTIA_FACTOR * body.mass * body.radius * body.radius
    alpha = body.torque.scale(1.0 / inertia)
    body.angular_velocity = body.angular_velocity + alpha.scale(dt)

    if body.drive_mode is DriveMode.TORQUE:
        body.velocity = rolling_velocity(body.angular_velocity, body.radius)

    pos = actor.transform.position + body.velocity.scale(dt)
    # Planar constraint: the ball stays on the ground, no vertical motion.
    actor.transform.position = Vec3(pos.x, body.radius, pos.z)
    if body.velocity.y != 0.0:
        body.velocity = Vec3(body.velocity.x, 0.0, body.velocity.z)

    w = body.angular_velocity
    if w.x != 0.0 or w.y != 0.0 or w.z != 0.0:
        spin = Orientation.about_axis(w, w.norm * dt)
        actor.transform.orientation = compose(spin, actor.transform.orientation)


def _resolve_rails(actor: Actor, cfg: PhysicsConfig) -> None:
    """Clamp the body inside the rails and reflect the outward velocity."""
    body = actor.body
    bound = cfg.table_half_extent - body.radius
    pos = actor.transform.position
    vel = body.velocity
    px, pz = pos.x, pos.z
    vx, vz = vel.x, vel.z
    reflected = False
    if px > bound:
        px = bound
        if vx > 0.0:
            vx = -cfg.rail_restitution * vx
        reflected = True
    elif px < -bound:
        px = -bound
        if vx < 0.0:
            vx = -cfg.rail_restitution * vx
        reflected = True
    if pz > bound:
        pz = bound
        if vz > 0.0:
            vz = -cfg.rail_restitution * vz
        reflected = True
    elif pz < -bound:
        pz = -bound
        if vz < 0.0:
            vz = -cfg.rail_restitution * vz
        reflected = True
    if reflected:
        actor.transform.position = Vec3(px, pos.y, pz)
        body.velocity = Vec3(vx, vel.y, vz)
        if body.drive_mode is DriveMode.TORQUE:
            body.angular_velocity = rolling_angular_velocity(
                body.velocity, body.radius, body.angular_velocity.y
            )


def _current_overlaps(scene: Scene) -> set[tuple[int, int]]:
    pairs: set[tuple[int, int]] = set()
    spheres = [a for a in scene.actors if a.body is not None and a.active]
    for trig in scene.actors:
        if trig.trigger is None or not trig.active:
            continue
        for sphere in spheres:
            if sphere.id == trig.id:
                continue
            hit = sphere_aabb_overlap(
                sphere.transform.position,
                sphere.body.radius,
                trig.transform.position,
                trig.trigger.half_extents,
            )
            if hit:
                pairs.add((trig.id, sphere.id))
    return pairs


def detect_overlaps(scene: Scene) -> list[tuple[int, int]]:
    """Currently-overlapping (trigger, other) pairs, sorted. No side effects."""
    return sorted(_current_overlaps(scene))


def step(scene: Scene, cfg: PhysicsConfig) -> list[OverlapEvent]:
    """Advance the scene one fixed timestep and return new overlap events."""
    scene.step_index += 1
    scene.elapsed += cfg.fixed_dt

    dispatch_fixed_events(scene, cfg.fixed_dt)

    dynamic = [a for a in scene.actors if a.body is not None and a.active]
    for actor in dynamic:
        try:
            _integrate_body(actor, cfg.fixed_dt)
        except ValueError as exc:
            raise NumericalDivergence(
                scene.step_index, f"actor {actor.id} ({actor.name}): {exc}"
            ) from exc
        _resolve_rails(actor, cfg)

    now = _current_overlaps(scene)
    new_pairs = sorted(now - scene.overlap_pairs)
    scene.overlap_pairs = now
    events = [OverlapEvent(t, o, scene.step_index) for t, o in new_pairs]

    for actor in scene.actors:
        if actor.body is not None:
            actor.body.force = Vec3.zero()
            actor.body.torque = Vec3.zero()

    return events
