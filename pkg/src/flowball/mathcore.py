"""Minimal 3D math for the engine: vectors, Euler-angle rotators, unit
quaternions, and the sphere-vs-box overlap test.

Conventions used everywhere in this package:

* Right-handed coordinates with +y up; the ball rolls on the y = 0 plane.
* A ``Rotator`` holds degrees: roll about +x, pitch about +z, yaw about +y,
  composed intrinsically in that order (roll, then pitch, then yaw).
* Orientations are unit quaternions stored as (w, x, y, z).
* ``compose(a, b)`` is the quaternion product a*b, i.e. "apply b, then a";
  applying a delta on top of a current orientation is ``compose(delta, cur)``.

All values are plain Python floats so results are reproducible bit-for-bit
across runs and platforms that share IEEE-754 doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Orientations are renormalized only when the squared norm drifts past this,
# so composing with an exact identity stays bit-exact.
_RENORM_EPSILON = 1e-12


def _check_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} component is not finite: {v!r}")


@dataclass(frozen=True, slots=True)
class Vec3:
    """Immutable 3-vector of finite floats."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        _check_finite("Vec3", self.x, self.y, self.z)

    @classmethod
    def zero(cls) -> "Vec3":
        return cls(0.0, 0.0, 0.0)

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def scale(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    @property
    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True, slots=True)
class Rotator:
    """Euler angles in degrees: roll about x, pitch about z, yaw about y."""

    roll: float
    pitch: float
    yaw: float

    def __post_init__(self):
        _check_finite("Rotator", self.roll, self.pitch, self.yaw)

    @classmethod
    def zero(cls) -> "Rotator":
        return cls(0.0, 0.0, 0.0)

    def scale(self, s: float) -> "Rotator":
        return Rotator(self.roll * s, self.pitch * s, self.yaw * s)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.roll, self.pitch, self.yaw)


@dataclass(frozen=True, slots=True)
class Orientation:
    """Unit quaternion (w, x, y, z)."""

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        _check_finite("Orientation", self.w, self.x, self.y, self.z)

    @classmethod
    def identity(cls) -> "Orientation":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def about_axis(cls, axis: Vec3, radians: float) -> "Orientation":
        """Rotation of ``radians`` about ``axis`` (need not be unit length)."""
        n = axis.norm
        if n == 0.0:
            return cls.identity()
        half = 0.5 * radians
        s = math.sin(half) / n
        return cls(math.cos(half), axis.x * s, axis.y * s, axis.z * s)

    @property
    def norm_squared(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def normalized(self) -> "Orientation":
        """Rescale to unit norm, but only if drift exceeds the epsilon.

        Returning ``self`` unchanged for already-unit quaternions keeps
        identity composition bit-exact.
        """
        ns = self.norm_squared
        if abs(ns - 1.0) <= _RENORM_EPSILON:
            return self
        inv = 1.0 / math.sqrt(ns)
        return Orientation(self.w * inv, self.x * inv, self.y * inv, self.z * inv)

    def rotate(self, v: Vec3) -> Vec3:
        """Rotate a vector by this orientation (q v q^-1 for unit q)."""
        # Classic two-cross-product expansion; avoids building a matrix.
        u = Vec3(self.x, self.y, self.z)
        t = u.cross(v).scale(2.0)
        return v + t.scale(self.w) + u.cross(t)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)


def compose(a: Orientation, b: Orientation) -> Orientation:
    """Quaternion product a*b: the rotation "b first, then a"."""
    w = a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z
    x = a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y
    y = a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x
    z = a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w
    return Orientation(w, x, y, z).normalized()


def rotator_to_orientation(r: Rotator) -> Orientation:
    """Convert Euler degrees to a quaternion: qx(roll) * qz(pitch) * qy(yaw)."""
    qx = Orientation.about_axis(Vec3(1.0, 0.0, 0.0), math.radians(r.roll))
    qz = Orientation.about_axis(Vec3(0.0, 0.0, 1.0), math.radians(r.pitch))
    qy = Orientation.about_axis(Vec3(0.0, 1.0, 0.0), math.radians(r.yaw))
    return compose(compose(qx, qz), qy)


def geodesic_degrees(a: Orientation, b: Orientation) -> float:
    """Smallest rotation angle taking orientation ``a`` to ``b``, in degrees."""
    dot = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z
    # q and -q are the same rotation, so fold the sign in.
    c = min(1.0, abs(dot))
    return math.degrees(2.0 * math.acos(c))


def yaw_degrees(q: Orientation) -> float:
    """Heading about +y for a yaw-dominant orientation, in (-180, 180]."""
    # For q = qy(yaw): w = cos(yaw/2), y = sin(yaw/2).
    siny = 2.0 * (q.w * q.y + q.x * q.z)
    cosy = 1.0 - 2.0 * (q.y * q.y + q.z * q.z)
    return math.degrees(math.atan2(siny, cosy))


def sphere_aabb_overlap(
    center: Vec3, radius: float, box_center: Vec3, half_extents: Vec3
) -> bool:
    """True when a sphere touches or penetrates an axis-aligned box.

    Uses the closest-point construction: clamp the sphere center to the box,
    then compare the squared distance against radius^2. Touching counts.
    """
    cx = min(max(center.x, box_center.x - half_extents.x), box_center.x + half_extents.x)
    cy = min(max(center.y, box_center.y - half_extents.y), box_center.y + half_extents.y)
    cz = min(max(center.z, box_center.z - half_extents.z), box_center.z + half_extents.z)
    dx = center.x - cx
    dy = center.y - cy
    dz = center.z - cz
    return dx * dx + dy * dy + dz * dz <= radius * radius
