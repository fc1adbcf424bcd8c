"""Points, headings, unit disks, arcs and the tolerance policy.

Every circle handled by this package has radius exactly 1, so the radius is
never stored.  Angles are normalised to ``(-pi, pi]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CoincidentCircles

TWO_PI = 2.0 * math.pi


class Point(NamedTuple):
    x: float
    y: float

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def scaled(self, k: float) -> "Point":
        return Point(self.x * k, self.y * k)

    def dist(self, other) -> float:
        return math.hypot(self.x - other[0], self.y - other[1])


class Direction(NamedTuple):
    ux: float
    uy: float

    @classmethod
    def from_angle(cls, theta: float) -> "Direction":
        return cls(math.cos(theta), math.sin(theta))

    @classmethod
    def from_vector(cls, vx: float, vy: float) -> "Direction":
        norm = math.hypot(vx, vy)
        if norm == 0.0:
            raise ValueError("cannot normalise a zero vector")
        return cls(vx / norm, vy / norm)

    @property
    def angle(self) -> float:
        return math.atan2(self.uy, self.ux)

    def left(self) -> "Direction":
        return Direction(-self.uy, self.ux)

    def right(self) -> "Direction":
        return Direction(self.uy, -self.ux)

    def __neg__(self) -> "Direction":
        return Direction(-self.ux, -self.uy)


@dataclass(frozen=True)
class TolerancePolicy:
    tol_len: float = 1e-9
    tol_angle: float = 1e-9
    tol_band: float = 1e-6

    def __post_init__(self):
        for name in ("tol_len", "tol_angle", "tol_band"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = TolerancePolicy()


@dataclass(frozen=True)
class Configuration:
    point: Point
    dir: Direction

    def __post_init__(self):
        object.__setattr__(self, "point", Point(float(self.point[0]), float(self.point[1])))
        d = Direction(float(self.dir[0]), float(self.dir[1]))
        if abs(d.ux * d.ux + d.uy * d.uy - 1.0) > 1e-9:
            raise ValueError("configuration direction must be a unit vector")
        object.__setattr__(self, "dir", d)

    @classmethod
    def from_pose(cls, x: float, y: float, theta: float) -> "Configuration":
        return cls(Point(x, y), Direction.from_angle(theta))

    @property
    def heading(self) -> float:
        return self.dir.angle

    def mirrored(self) -> "Configuration":
        """Reflection through the y axis (x -> -x)."""
        return Configuration(Point(-self.point.x, self.point.y), Direction(-self.dir.ux, self.dir.uy))


@dataclass(frozen=True)
class UnitDisk:
    center: Point

    def __post_init__(self):
        object.__setattr__(self, "center", Point(float(self.center[0]), float(self.center[1])))

    def contains(self, p, tol: float = 0.0) -> bool:
        return self.center.dist(p) <= 1.0 + tol

    def point_at(self, theta: float) -> Point:
        return Point(self.center.x + math.cos(theta), self.center.y + math.sin(theta))

    def angle_of(self, p) -> float:
        return math.atan2(p[1] - self.center.y, p[0] - self.center.x)


def normalize_angle(theta: float) -> float:
    """Map an angle into ``(-pi, pi]``."""
    theta = math.fmod(theta, TWO_PI)
    if theta <= -math.pi:
        theta += TWO_PI
    elif theta > math.pi:
        theta -= TWO_PI
    return theta


def ccw_delta(a: float, b: float) -> float:
    """Counterclockwise sweep from angle ``a`` to angle ``b`` in ``[0, 2pi)``."""
    d = math.fmod(b - a, TWO_PI)
    if d < 0.0:
        d += TWO_PI
    if d >= TWO_PI:
        d -= TWO_PI
    return d


@dataclass(frozen=True)
class ArcElement:
    center: Point
    from_angle: float
    to_angle: float
    ccw: bool = True

    def __post_init__(self):
        object.__setattr__(self, "center", Point(float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "from_angle", normalize_angle(float(self.from_angle)))
        object.__setattr__(self, "to_angle", normalize_angle(float(self.to_angle)))

    @property
    def extent(self) -> float:
        """Angular extent in the arc's own orientation, in ``(0, 2pi]``."""
        if self.ccw:
            d = ccw_delta(self.from_angle, self.to_angle)
        else:
            d = ccw_delta(self.to_angle, self.from_angle)
        return TWO_PI if d == 0.0 else d

    @property
    def length(self) -> float:
        return self.extent

    @property
    def sign(self) -> float:
        return 1.0 if self.ccw else -1.0

    @property
    def start(self) -> Point:
        return self.point_at(0.0)

    @property
    def end(self) -> Point:
        return self.point_at(1.0)

    def angle_at(self, t: float) -> float:
        return self.from_angle + self.sign * self.extent * t

    def point_at(self, t: float) -> Point:
        a = self.angle_at(t)
        return Point(self.center.x + math.cos(a), self.center.y + math.sin(a))

    def tangent_at(self, t: float) -> Direction:
        a = self.angle_at(t)
        d = Direction(-math.sin(a), math.cos(a))
        return d if self.ccw else -d

    def sample(self, n: int) -> np.ndarray:
        ang = self.from_angle + self.sign * self.extent * np.linspace(0.0, 1.0, n)
        return np.column_stack((self.center.x + np.cos(ang), self.center.y + np.sin(ang)))

    def reversed(self) -> "ArcElement":
        return ArcElement(self.center, self.to_angle, self.from_angle, not self.ccw)


@dataclass(frozen=True)
class SegmentElement:
    a: Point
    b: Point

    def __post_init__(self):
        object.__setattr__(self, "a", Point(float(self.a[0]), float(self.a[1])))
        object.__setattr__(self, "b", Point(float(self.b[0]), float(self.b[1])))

    @property
    def start(self) -> Point:
        return self.a

    @property
    def end(self) -> Point:
        return self.b

    @property
    def length(self) -> float:
        return self.a.dist(self.b)

    def point_at(self, t: float) -> Point:
        return Point(self.a.x + (self.b.x - self.a.x) * t, self.a.y + (self.b.y - self.a.y) * t)

    def tangent_at(self, t: float = 0.0) -> Direction:
        return Direction.from_vector(self.b.x - self.a.x, self.b.y - self.a.y)

    def sample(self, n: int) -> np.ndarray:
        t = np.linspace(0.0, 1.0, n)[:, None]
        a = np.asarray(self.a)
        return a + t * (np.asarray(self.b) - a)

    def reversed(self) -> "SegmentElement":
        return SegmentElement(self.b, self.a)


def left_disk(c: Configuration) -> UnitDisk:
    return UnitDisk(Point(c.point.x - c.dir.uy, c.point.y + c.dir.ux))


def right_disk(c: Configuration) -> UnitDisk:
    return UnitDisk(Point(c.point.x + c.dir.uy, c.point.y - c.dir.ux))


def side_disk(c: Configuration, side: str) -> UnitDisk:
    return left_disk(c) if side == "left" else right_disk(c)


def intersect_circle_segment(d: UnitDisk, seg: SegmentElement, tol: float = DEFAULT_TOL.tol_len) -> list[Point]:
    """Points where the unit circle of ``d`` meets ``seg``.

    A supporting line at distance ``1 +- tol`` from the centre is snapped to an
    exact tangency and yields a single point.
    """
    ax, ay = seg.a
    dx, dy = seg.b.x - ax, seg.b.y - ay
    L = math.hypot(dx, dy)
    if L == 0.0:
        return [seg.a] if abs(d.center.dist(seg.a) - 1.0) <= tol else []
    ux, uy = dx / L, dy / L
    # foot of the perpendicular from the centre, in arclength along the segment
    fx, fy = d.center.x - ax, d.center.y - ay
    s0 = fx * ux + fy * uy
    h = fx * uy - fy * ux
    disc = 1.0 - h * h
    if abs(abs(h) - 1.0) <= tol:
        params = [s0]
    elif disc < 0.0:
        return []
    else:
        r = math.sqrt(disc)
        params = [s0 - r, s0 + r]
    out = []
    for s in params:
        if -tol <= s <= L + tol:
            s = min(max(s, 0.0), L)
            out.append(Point(ax + ux * s, ay + uy * s))
    return out


def intersect_circles(d1: UnitDisk, d2: UnitDisk, tol: float = DEFAULT_TOL.tol_len) -> list[Point]:
    c1, c2 = d1.center, d2.center
    dx, dy = c2.x - c1.x, c2.y - c1.y
    D = math.hypot(dx, dy)
    if D < tol:
        raise CoincidentCircles(f"circles centred at {c1} and {c2} coincide")
    mx, my = c1.x + dx / 2.0, c1.y + dy / 2.0
    if abs(D - 2.0) <= tol:
        return [Point(mx, my)]
    if D > 2.0:
        return []
    k = math.sqrt(max(1.0 - D * D / 4.0, 0.0)) / D
    return [Point(mx - dy * k, my + dx * k), Point(mx + dy * k, my - dx * k)]


def tangent_ray_from_disk(d: UnitDisk, theta: float, ccw: bool = True) -> Configuration:
    """Configuration on the circle of ``d`` at polar angle ``theta``, heading
    along the circle in the given rotational sense."""
    p = d.point_at(theta)
    head = Direction(-math.sin(theta), math.cos(theta))
    return Configuration(p, head if ccw else -head)
