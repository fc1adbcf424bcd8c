"""Convex polygons: validation, containment, forward chains and medial axes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    CollinearVertices,
    DuplicateVertex,
    NotConvex,
    PreconditionViolated,
    TooFewVertices,
    VertexStart,
)
from .geometry import (
    DEFAULT_TOL,
    TWO_PI,
    Configuration,
    Direction,
    Point,
    SegmentElement,
    TolerancePolicy,
)


class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices.

    Edge ``i`` runs from vertex ``i`` to vertex ``i + 1``.  ``normals[i]`` is the
    inward unit normal of that edge and ``offsets[i]`` satisfies
    ``normals[i] . p - offsets[i] >= 0`` for every point of the polygon.
    """

    def __init__(self, vertices, tol: TolerancePolicy = DEFAULT_TOL):
        self.vertices = np.asarray(vertices, dtype=float).reshape(-1, 2)
        self.tol = tol
        self.vertices.setflags(write=False)
        nxt = np.roll(self.vertices, -1, axis=0)
        d = nxt - self.vertices
        self.lengths = np.hypot(d[:, 0], d[:, 1])
        self.directions = d / self.lengths[:, None]
        self.normals = np.column_stack((-self.directions[:, 1], self.directions[:, 0]))
        self.offsets = np.einsum("ij,ij->i", self.normals, self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"ConvexPolygon({self.vertices.tolist()!r})"

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Point:
        return Point(*self.vertices[i % self.n])

    def edge(self, i: int) -> SegmentElement:
        return SegmentElement(self.vertex(i), self.vertex(i + 1))

    def edges(self) -> list[SegmentElement]:
        return [self.edge(i) for i in range(self.n)]

    @cached_property
    def area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    @cached_property
    def exterior_angles(self) -> np.ndarray:
        """Turning angle at vertex ``i`` (between edge ``i - 1`` and edge ``i``)."""
        prev = np.roll(self.directions, 1, axis=0)
        cross = prev[:, 0] * self.directions[:, 1] - prev[:, 1] * self.directions[:, 0]
        dot = np.einsum("ij,ij->i", prev, self.directions)
        return np.arctan2(cross, dot)

    def signed_distance(self, points) -> np.ndarray:
        """Minimum over edges of the inward signed distance (positive inside)."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return np.min(pts @ self.normals.T - self.offsets, axis=1)

    def contains_mask(self, points, tol: float = 0.0) -> np.ndarray:
        return self.signed_distance(points) >= -tol

    def mirrored(self) -> "ConvexPolygon":
        """Reflection through the y axis, re-ordered counterclockwise."""
        v = self.vertices[::-1].copy()
        v[:, 0] *= -1.0
        return ConvexPolygon(v, self.tol)

    def scaled(self, k: float) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices * k, self.tol)

    def locate(self, p, tol: float | None = None) -> tuple[int, float]:
        """Edge index and arclength of a boundary point along that edge."""
        tol = self.tol.tol_band if tol is None else tol
        pts = np.asarray(p, dtype=float)
        sd = self.normals @ pts - self.offsets
        rel = pts - self.vertices
        s = np.einsum("ij,ij->i", rel, self.directions)
        ok = (np.abs(sd) <= tol) & (s >= -tol) & (s <= self.lengths + tol)
        if not ok.any():
            raise PreconditionViolated(f"point {tuple(pts)} is not on the polygon boundary")
        i = int(np.argmin(np.where(ok, np.abs(sd), np.inf)))
        return i, float(s[i])


def validate(vertices, tol: TolerancePolicy = DEFAULT_TOL) -> ConvexPolygon:
    """Check strict convexity and counterclockwise order, then build the polygon."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2:
        raise TooFewVertices("vertices must be a sequence of (x, y) pairs")
    if len(v) < 3:
        raise TooFewVertices(f"a polygon needs at least 3 vertices, got {len(v)}")
    if not np.all(np.isfinite(v)):
        raise NotConvex("vertex coordinates must be finite")
    n = len(v)
    for i in range(n):
        for j in range(i + 1, n):
            if np.hypot(*(v[i] - v[j])) <= tol.tol_len:
                raise DuplicateVertex(f"vertices {i} and {j} coincide")
    d = np.roll(v, -1, axis=0) - v
    nd = d / np.hypot(d[:, 0], d[:, 1])[:, None]
    prev = np.roll(nd, 1, axis=0)
    cross = prev[:, 0] * nd[:, 1] - prev[:, 1] * nd[:, 0]
    if np.any(np.abs(cross) <= tol.tol_len):
        i = int(np.argmin(np.abs(cross)))
        raise CollinearVertices(f"vertices around index {i} are collinear")
    if np.any(cross < 0.0):
        raise NotConvex("vertices must form a strictly convex counterclockwise polygon")
    # strictly convex turns could still wind around more than once
    ang = np.arctan2(cross, np.einsum("ij,ij->i", prev, nd))
    if abs(ang.sum() - TWO_PI) > 1e-6:
        raise NotConvex("polygon boundary winds more than once")
    return ConvexPolygon(v, tol)


def contains(P: ConvexPolygon, p, band: float | None = None) -> str:
    """Classify ``p`` as ``"inside"``, ``"boundary"`` or ``"outside"``."""
    band = P.tol.tol_band if band is None else band
    sd = float(P.signed_distance(p)[0])
    if sd > band:
        return "inside"
    if sd >= -band:
        return "boundary"
    return "outside"


@dataclass(frozen=True)
class BoundaryConfiguration:
    """Configuration on the polygon boundary, heading along its edge.

    ``ccw`` is False when the heading is the reverse of the edge direction.
    """

    edge_index: int
    point: Point
    dir: Direction
    ccw: bool = True
    param: float = 0.0

    @property
    def config(self) -> Configuration:
        return Configuration(self.point, self.dir)


def boundary_configuration(P: ConvexPolygon, point, ccw: bool = True, edge_index: int | None = None) -> BoundaryConfiguration:
    """Snap ``point`` onto the boundary and orient it along the edge.

    Raises ``VertexStart`` when the point coincides with a polygon vertex.
    """
    if edge_index is None:
        i, s = P.locate(point)
    else:
        i = edge_index % P.n
        s = float(np.dot(np.asarray(point, float) - P.vertices[i], P.directions[i]))
    tol = P.tol.tol_len * 10
    if s <= tol or s >= P.lengths[i] - tol:
        raise VertexStart(f"boundary configuration at {tuple(point)} sits on a vertex")
    p = P.vertices[i] + s * P.directions[i]
    d = Direction(*P.directions[i])
    return BoundaryConfiguration(i, Point(*p), d if ccw else -d, ccw, s)


def as_boundary_configuration(P: ConvexPolygon, c: Configuration, tol: float | None = None) -> BoundaryConfiguration | None:
    """Interpret ``c`` as a boundary configuration when it lies on an edge and
    heads along it; return None otherwise."""
    tol = P.tol.tol_band if tol is None else tol
    sd = P.normals @ np.asarray(c.point) - P.offsets
    for i in np.flatnonzero(np.abs(sd) <= tol):
        s = float(np.dot(np.asarray(c.point) - P.vertices[i], P.directions[i]))
        if not (-tol <= s <= P.lengths[i] + tol):
            continue
        dot = c.dir.ux * P.directions[i, 0] + c.dir.uy * P.directions[i, 1]
        if dot >= 1.0 - P.tol.tol_angle * 10:
            return boundary_configuration(P, c.point, True, int(i))
        if dot <= -1.0 + P.tol.tol_angle * 10:
            return boundary_configuration(P, c.point, False, int(i))
    return None


@dataclass(frozen=True)
class ForwardChain:
    start: BoundaryConfiguration
    elements: list[SegmentElement]
    total_turn: float
    edge_indices: list[int] = field(default_factory=list)


def chain_edges(P: ConvexPolygon, edge_index: int) -> tuple[list[int], float]:
    """Edges of the forward chain from a point inside ``edge_index``."""
    tol = P.tol.tol_angle
    ext = P.exterior_angles
    edges = [edge_index % P.n]
    turn = 0.0
    for k in range(1, P.n):
        j = (edge_index + k) % P.n
        if turn + ext[j] > math.pi + tol:
            break
        turn += ext[j]
        edges.append(j)
    return edges, turn


def forward_chain(P: ConvexPolygon, s: BoundaryConfiguration) -> ForwardChain:
    """Longest boundary chain from ``s``, in its direction of travel, turning by
    at most pi.  Clockwise starts are solved in the mirrored polygon; their
    ``edge_indices`` refer to the original edges."""
    if not s.ccw:
        M = P.mirrored()
        ch = forward_chain(M, boundary_configuration(M, (-s.point.x, s.point.y)))
        flip = lambda p: Point(-p.x, p.y)  # noqa: E731
        elements = [SegmentElement(flip(e.a), flip(e.b)) for e in ch.elements]
        # mirrored edge k is original edge n - 2 - k (mod n)
        return ForwardChain(s, elements, ch.total_turn, [(P.n - 2 - k) % P.n for k in ch.edge_indices])
    edges, turn = chain_edges(P, s.edge_index)
    elements = [SegmentElement(s.point, P.vertex(s.edge_index + 1))]
    elements += [P.edge(j) for j in edges[1:]]
    return ForwardChain(s, elements, turn, edges)


def arc_exit_angle(P: ConvexPolygon, center, start_angle: float, sense: float = 1.0) -> float:
    """How far (in radians, capped at 2pi) a unit circle can be travelled from
    ``start_angle`` in the given sense (+1 ccw, -1 cw) before leaving ``P``."""
    tol = P.tol.tol_len
    c = np.asarray(center, dtype=float)
    h = P.normals @ c - P.offsets
    beta = np.arctan2(P.normals[:, 1], P.normals[:, 0])
    active = h < 1.0 - tol
    if not active.any():
        return TWO_PI
    h = h[active]
    beta = beta[active]
    if np.any(h < -1.0):
        return 0.0
    # signed distance at the start; already outside means no travel at all
    if np.any(h + np.cos(start_angle - beta) < -tol):
        return 0.0
    w = np.arccos(np.clip(-h, -1.0, 1.0))
    if sense > 0:
        phi = np.mod(beta + w - start_angle, TWO_PI)
    else:
        phi = np.mod(start_angle - (beta - w), TWO_PI)
    phi = np.where(phi > TWO_PI - P.tol.tol_angle, 0.0, phi)
    return float(min(phi.min(), TWO_PI))


@dataclass(frozen=True)
class MedialAxis:
    """Axis edges as ``(p0, p1, clearance0, clearance1)``; clearance varies
    linearly along every edge."""

    edges: list[tuple[Point, Point, float, float]]

    def vertices(self) -> list[tuple[Point, float]]:
        seen: dict[tuple[float, float], float] = {}
        for p0, p1, r0, r1 in self.edges:
            seen.setdefault((round(p0.x, 9), round(p0.y, 9)), r0)
            seen.setdefault((round(p1.x, 9), round(p1.y, 9)), r1)
        return [(Point(*k), v) for k, v in seen.items()]

    def clearance_at(self, p) -> float | None:
        """Clearance at a point lying on one of the axis edges."""
        q = np.asarray(p, dtype=float)
        for p0, p1, r0, r1 in self.edges:
            a, b = np.asarray(p0), np.asarray(p1)
            ab = b - a
            L2 = float(ab @ ab)
            if L2 == 0.0:
                if np.hypot(*(q - a)) < 1e-7:
                    return r0
                continue
            t = float((q - a) @ ab) / L2
            if -1e-9 <= t <= 1 + 1e-9 and np.hypot(*(a + t * ab - q)) < 1e-7:
                return r0 + (r1 - r0) * t
        return None


def _three_line_point(P: ConvexPolygon, i: int, j: int, k: int):
    A = np.array(
        [
            [P.normals[i, 0], P.normals[i, 1], -1.0],
            [P.normals[j, 0], P.normals[j, 1], -1.0],
            [P.normals[k, 0], P.normals[k, 1], -1.0],
        ]
    )
    b = np.array([P.offsets[i], P.offsets[j], P.offsets[k]])
    if abs(np.linalg.det(A)) < 1e-14:
        return None
    x, y, t = np.linalg.solve(A, b)
    return Point(float(x), float(y)), float(t)


def convex_medial_axis(P: ConvexPolygon) -> MedialAxis:
    """Medial axis of a convex polygon by simulating the inward offset.

    Each step collapses the edge that vanishes first; O(n^2) overall.
    """
    active = list(range(P.n))
    # wavefront vertex between consecutive active lines: (origin, origin time)
    origin = {(active[k - 1], active[k]): (Point(*map(float, P.vertices[k])), 0.0) for k in range(P.n)}
    edges: list[tuple[Point, Point, float, float]] = []
    now = 0.0

    def emit(a: Point, b: Point, ra: float, rb: float):
        if a.dist(b) > 1e-12:
            edges.append((a, b, ra, rb))

    while len(active) > 2:
        m = len(active)
        best = None
        for k in range(m):
            i, j, l = active[k - 1], active[k], active[(k + 1) % m]
            sol = _three_line_point(P, i, j, l)
            if sol is None:
                continue
            pt, t = sol
            if t < now - 1e-9:
                continue
            if best is None or t < best[0] - 1e-12:
                best = (t, k, pt)
        if best is None:
            break
        t, k, pt = best
        now = max(now, t)
        i, j, l = active[k - 1], active[k], active[(k + 1) % m]
        for key in ((i, j), (j, l)):
            o, ot = origin.pop(key)
            emit(o, pt, ot, t)
        origin[(i, l)] = (pt, t)
        active.pop(k)
    if len(active) == 2:
        a, b = active
        o1, t1 = origin[(a, b)]
        o2, t2 = origin[(b, a)]
        emit(o1, o2, t1, t2)
    return MedialAxis(edges)
