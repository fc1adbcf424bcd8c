"""Reachability from a configuration on the polygon boundary.

Everything here works in the counterclockwise frame, where the start heads
counterclockwise along its edge and the polygon interior is reached by
turning left.  Clockwise starts are handled by mirroring the polygon,
computing, and mirroring the result back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionViolated, StartOutsidePolygon
from .filling import Core, Filling, compute_filling, core_intersection
from .geometry import (
    TWO_PI,
    ArcElement,
    Configuration,
    Direction,
    Point,
    SegmentElement,
    UnitDisk,
    side_disk,
)
from .polygon import (
    BoundaryConfiguration,
    ConvexPolygon,
    arc_exit_angle,
    boundary_configuration,
    chain_edges,
)
from .region import ArcGon, build_region

VALID_TOL = 1e-9
# configurations are kept this far from polygon vertices
VERTEX_GAP = 1e-7


def ray_exit(P: ConvexPolygon, p, u) -> float:
    """Length of the ray from ``p`` (inside ``P``) along ``u`` until it leaves ``P``."""
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    nu = P.normals @ u
    sd = P.normals @ p - P.offsets
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(nu < -1e-15, sd / -nu, np.inf)
    return float(max(t.min(), 0.0))


class LdaPart:
    """Points reachable by one arc on a side disk followed by one segment.

    ``side`` is ``"left"`` or ``"right"``.  Membership is exact: a point
    outside the open disk is reachable iff the arc needed to face it is no
    longer than the arc that stays inside the polygon.
    """

    kind = "lda"

    def __init__(self, P: ConvexPolygon, config: Configuration, side: str = "left"):
        self.polygon = P
        self.config = config
        self.side = side
        self.sense = 1.0 if side == "left" else -1.0
        self.disk = side_disk(config, side)
        self.center = np.asarray(self.disk.center)
        self.start_angle = math.atan2(config.point.y - self.center[1], config.point.x - self.center[0])
        self.phi_max = arc_exit_angle(P, self.center, self.start_angle, self.sense)
        self._region = None

    def __repr__(self) -> str:
        return f"LdaPart({tuple(self.config.point)}, heading={self.config.heading:.6f}, {self.side})"

    @property
    def key(self):
        return (round(self.config.point.x, 9), round(self.config.point.y, 9), round(self.config.heading, 9), self.side)

    def point_at(self, phi: float) -> np.ndarray:
        a = self.start_angle + self.sense * phi
        return self.center + np.array([math.cos(a), math.sin(a)])

    def heading_at(self, phi: float) -> np.ndarray:
        a = self.start_angle + self.sense * phi
        return self.sense * np.array([-math.sin(a), math.cos(a)])

    def turn_to(self, points) -> np.ndarray:
        """Arc angle after which the tangent ray passes through each point
        (NaN for points inside the open disk)."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        rel = pts - self.center
        r2 = rel[:, 0] ** 2 + rel[:, 1] ** 2
        L = np.sqrt(np.clip(r2 - 1.0, 0.0, None))
        alpha = np.arctan2(rel[:, 1], rel[:, 0]) - self.sense * np.arctan(L)
        phi = np.mod(self.sense * (alpha - self.start_angle), TWO_PI)
        phi = np.where(phi > TWO_PI - 1e-12, 0.0, phi)
        return np.where(r2 >= 1.0 - 1e-12, phi, np.nan)

    def contains_mask(self, points, atol: float = 0.0) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        phi = self.turn_to(pts)
        with np.errstate(invalid="ignore"):
            ok = phi <= self.phi_max + atol
        return ok & self.polygon.contains_mask(pts, atol)

    def curves(self) -> list:
        P = self.polygon
        out = [ArcElement(self.center, 0.0, 0.0, True)]
        p0 = np.asarray(self.config.point)
        u0 = np.asarray(self.config.dir)
        L0 = ray_exit(P, p0, u0)
        if L0 > 1e-12:
            out.append(SegmentElement(p0, p0 + L0 * u0))
        if self.phi_max < TWO_PI:
            p1 = self.point_at(self.phi_max)
            u1 = self.heading_at(self.phi_max)
            L1 = ray_exit(P, p1, u1)
            if L1 > 1e-12:
                out.append(SegmentElement(p1, p1 + L1 * u1))
        return out

    def region(self) -> ArcGon:
        if self._region is None:
            self._region = build_region(self.curves() + self.polygon.edges(), self.contains_mask)
        return self._region


class CoreComplementPart:
    """The polygon minus the open intersection of all filling disks."""

    kind = "core"

    def __init__(self, P: ConvexPolygon, core: Core):
        self.polygon = P
        self.core = core
        self.key = ("core",)

    def __repr__(self) -> str:
        return f"CoreComplementPart({len(self.core.centers)} disks)"

    def contains_mask(self, points, atol: float = 0.0) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        inside = self.polygon.contains_mask(pts, atol)
        if self.core.is_empty:
            return inside
        return inside & ~self.core.interior_mask(pts, -atol)

    def curves(self) -> list:
        return self.core.region.elements()

    def region(self) -> ArcGon:
        return build_region(self.curves() + self.polygon.edges(), self.contains_mask)


@dataclass(frozen=True)
class LdaRegion:
    source: Configuration
    side: str
    region: ArcGon
    exit_arc_end: float
    part: LdaPart = field(repr=False, compare=False, default=None)


def lda(P: ConvexPolygon, c: Configuration, side: str = "left") -> LdaRegion:
    """Directly accessible region on one side of ``c``."""
    if P.signed_distance(c.point)[0] < -P.tol.tol_band:
        raise StartOutsidePolygon(f"start {tuple(c.point)} lies outside the polygon")
    part = LdaPart(P, c, side)
    return LdaRegion(c, side, part.region(), part.phi_max, part)


# ---------------------------------------------------------------------------
# candidate search along one edge


def _chain_hits_disk(P: ConvexPolygon, s: BoundaryConfiguration, center: np.ndarray, tol: float = VALID_TOL) -> bool:
    """Whether the forward chain from ``s`` meets the open unit disk at ``center``."""
    edges, _ = chain_edges(P, s.edge_index)
    a = np.vstack([np.asarray(s.point)] + [P.vertices[j] for j in edges[1:]])
    b = np.vstack([P.vertices[(j + 1) % P.n] for j in edges])
    return bool(np.min(_seg_dist(center, a, b)) < 1.0 - tol)


def _seg_dist(c: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    L2 = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", c - a, ab) / np.where(L2 > 0, L2, 1.0), 0.0, 1.0)
    q = a + t[:, None] * ab
    return np.hypot(q[:, 0] - c[0], q[:, 1] - c[1])


def circle_boundary_crossings(P: ConvexPolygon, center, exclude=None, tol: float = 1e-9) -> np.ndarray:
    """Points where a unit circle meets the polygon boundary."""
    c = np.asarray(center, dtype=float)
    out = []
    for i in range(P.n):
        a = P.vertices[i]
        u = P.directions[i]
        f = c - a
        s0 = f @ u
        h = P.normals[i] @ c - P.offsets[i]
        disc = 1.0 - h * h
        if disc < -tol:
            continue
        w = math.sqrt(max(disc, 0.0))
        for s in {s0 - w, s0 + w}:
            if -tol <= s <= P.lengths[i] + tol:
                out.append(a + s * u)
    pts = np.array(out).reshape(-1, 2)
    if exclude is not None and len(pts):
        pts = pts[np.hypot(*(pts - np.asarray(exclude)).T) > 1e-7]
    return pts


def first_contact_point(P: ConvexPolygon, s: BoundaryConfiguration) -> Point | None:
    """First boundary point counterclockwise from ``s`` inside ``DL(s)``."""
    cs = np.asarray(side_disk(s.config, "left").center)
    X = circle_boundary_crossings(P, cs, exclude=s.point)
    if len(X) == 0:
        return None
    # order by boundary arclength measured ccw from s
    perim = np.concatenate(([0.0], np.cumsum(P.lengths)))
    total = perim[-1]
    base = perim[s.edge_index] + s.param
    keys = []
    for x in X:
        i, t = P.locate(x, tol=1e-7)
        keys.append((perim[i] + t - base) % total)
    return Point(*X[int(np.argmin(keys))])


def disk_valid(P: ConvexPolygon, cs: np.ndarray, c: np.ndarray, tol: float = VALID_TOL) -> bool:
    """Whether the unit disk at ``c`` lies inside ``P`` united with the unit disk at ``cs``."""
    h = P.normals @ c - P.offsets
    bad = h < 1.0 - tol
    if not bad.any():
        return True
    if np.hypot(*(c - cs)) <= 1e-12:
        return True
    h = h[bad]
    if np.any(h < -1.0):
        return False
    n = P.normals[bad]
    d = P.directions[bad]
    w = np.sqrt(np.clip(1.0 - h * h, 0.0, None))
    foot = c - h[:, None] * n
    for sgn in (-1.0, 1.0):
        q = foot + sgn * w[:, None] * d
        if np.any(np.hypot(q[:, 0] - cs[0], q[:, 1] - cs[1]) > 1.0 + tol):
            return False
    # the point of the disk farthest from cs must not be in any cap
    v = c - cs
    v = v / np.hypot(*v)
    return not np.any(-(n @ v) > h + tol)


def _critical_positions(P: ConvexPolygon, f: int, cs: np.ndarray, X: np.ndarray):
    """Edge positions where a disk tangent to edge ``f`` can change validity.

    Returns ``(x, kind)`` pairs: tangency with another edge line or passage
    through a point where ``DL(s)`` crosses the boundary.
    """
    V, d, n = P.vertices[f], P.directions[f], P.normals[f]
    c0 = V + n
    out = []
    nd = P.normals @ d
    h0 = P.normals @ c0 - P.offsets
    for g in range(P.n):
        if g == f or abs(nd[g]) < 1e-12:
            continue
        out.append(((1.0 - h0[g]) / nd[g], "two_edge_tangent", g))
    for q in X:
        f0 = q - c0
        b = f0 @ d
        disc = b * b - (f0 @ f0 - 1.0)
        if disc < 0:
            continue
        r = math.sqrt(disc)
        out.append((b - r, "one_edge_through_d", -1))
        out.append((b + r, "one_edge_through_d", -1))
    return out


def first_valid_position(P: ConvexPolygon, f: int, x_lo: float, cs: np.ndarray, X: np.ndarray):
    """Smallest ``x >= x_lo`` on edge ``f`` whose tangent disk is valid."""
    L = P.lengths[f]
    hi = L - VERTEX_GAP
    lo = max(x_lo, VERTEX_GAP)
    if lo > hi:
        return None
    crit = sorted({min(max(x, lo), hi) for x, _, _ in _critical_positions(P, f, cs, X)} | {lo, hi})
    V, d, n = P.vertices[f], P.directions[f], P.normals[f]

    def ok(x):
        return disk_valid(P, cs, V + x * d + n)

    prev = None
    for x in crit:
        if prev is not None and x - prev > 1e-12 and ok(0.5 * (prev + x)):
            return prev
        if ok(x):
            return x
        prev = x
    return None


def blocking_position(P: ConvexPolygon, f: int, x0: float) -> tuple[float, bool]:
    """First ``x >= x0`` on edge ``f`` where the tangent disk meets the forward
    chain beyond its own tangency.  Returns ``(x, found)``."""
    edges, _ = chain_edges(P, f)
    V, d, n = P.vertices[f], P.directions[f], P.normals[f]
    c0 = V + n
    L = P.lengths[f]
    tol = VALID_TOL
    best = math.inf
    for g in edges[1:]:
        a, b = P.vertices[g], P.vertices[(g + 1) % P.n]
        cand = [x0]
        ng = P.normals[g]
        rate = ng @ d
        if abs(rate) > 1e-15:
            for target in (1.0, -1.0):
                cand.append((target - (ng @ c0 - P.offsets[g])) / rate)
        for v in (a, b):
            f0 = v - c0
            bb = f0 @ d
            disc = bb * bb - (f0 @ f0 - 1.0)
            if disc >= 0:
                r = math.sqrt(disc)
                cand += [bb - r, bb + r]
        cand = np.array([x for x in cand if x0 - 1e-12 <= x <= L + 1e-12])
        if len(cand) == 0:
            continue
        cs = c0 + cand[:, None] * d
        ab = b - a
        t = np.clip(((cs - a) @ ab) / (ab @ ab), 0.0, 1.0)
        dist = np.hypot(*(a + t[:, None] * ab - cs).T)
        hit = cand[dist <= 1.0 + tol]
        if len(hit):
            best = min(best, float(hit.min()))
    if best <= L:
        return max(best, x0), True
    return L, False


@dataclass(frozen=True)
class CandidateConfiguration:
    config: BoundaryConfiguration
    disk: UnitDisk
    kind: str


@dataclass
class Bfil:
    """Reduced disk set.  ``entries`` pair each disk with the boundary
    configuration whose left region it contributes (None for filling disks,
    which contribute the polygon minus the core)."""

    entries: list[tuple[UnitDisk, BoundaryConfiguration | None]]
    case: str  # "pocket" | "filling" | "general"

    @property
    def disks(self) -> list[UnitDisk]:
        return [d for d, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def _unmirror(bc: BoundaryConfiguration, P: ConvexPolygon) -> BoundaryConfiguration:
    i, t = P.locate((-bc.point.x, bc.point.y), tol=1e-7)
    t = min(max(t, VERTEX_GAP), P.lengths[i] - VERTEX_GAP)
    p = P.vertices[i] + t * P.directions[i]
    return BoundaryConfiguration(i, Point(*p), -Direction(*P.directions[i]), False, float(t))


def _bc_at(P: ConvexPolygon, f: int, x: float) -> BoundaryConfiguration:
    p = P.vertices[f] + x * P.directions[f]
    return BoundaryConfiguration(f, Point(*p), Direction(*P.directions[f]), True, float(x))


def classify_start(P: ConvexPolygon, s: BoundaryConfiguration, fil_empty: bool) -> str:
    """``"pocket"`` when the chain cuts the left disk, ``"filling"`` when the
    left disk belongs to the filling, ``"general"`` otherwise (ccw frame)."""
    cs = np.asarray(side_disk(s.config, "left").center)
    if _chain_hits_disk(P, s, cs):
        return "pocket"
    if not fil_empty and np.min(P.normals @ cs - P.offsets) >= 1.0 - 1e-7:
        return "filling"
    return "general"


def edge_reductions(P: ConvexPolygon, s: BoundaryConfiguration) -> dict[int, tuple[float, float, bool]]:
    """Per forward-chain edge ``f``: ``(x_first, x_block, found)`` of the first
    valid disk position and its blocking position (ccw frame)."""
    cs = np.asarray(side_disk(s.config, "left").center)
    X = circle_boundary_crossings(P, cs, exclude=s.point)
    edges, _ = chain_edges(P, s.edge_index)
    out = {}
    for f in edges:
        # valid disks outside the filling must reach into DL(s)
        V, d, n = P.vertices[f], P.directions[f], P.normals[f]
        rel = cs - (V + n)
        b = rel @ d
        disc = b * b - (rel @ rel - 4.0)
        if disc < 0 and f != s.edge_index:
            continue
        x_lo = s.param if f == s.edge_index else 0.0
        if f == s.edge_index:
            x1 = s.param
        else:
            r = math.sqrt(max(disc, 0.0))
            x_lo = max(x_lo, b - r - 1e-9)
            if x_lo > P.lengths[f]:
                continue
            x1 = first_valid_position(P, f, x_lo, cs, X)
            if x1 is None or x1 > b + r + 1e-9:
                continue
        xb, found = blocking_position(P, f, x1)
        out[f] = (x1, xb, found)
    return out


def _side(bc: BoundaryConfiguration) -> str:
    return "left" if bc.ccw else "right"


@dataclass
class Route:
    """How a part is entered: an optional prefix (opaque to this module)
    ending at the boundary configuration ``entry``."""

    prefix: object
    entry: BoundaryConfiguration


def collect_parts(P: ConvexPolygon, entries, fil: Filling, core: Core | None = None):
    """Region parts reachable from several boundary configurations at once.

    ``entries`` is a list of ``(BoundaryConfiguration, prefix)``.  Per edge
    and orientation, first-valid positions from all entries are merged: a
    position lying between an earlier first-valid position and its blocking
    position adds nothing new.  Returns ``(parts, bfil_entries, cases)``.
    """
    mirror = None
    parts: list = []
    bentries: list = []
    cases = []
    core_routes = []
    groups: dict = {}
    for s, prefix in entries:
        if s.ccw:
            Pw, sw, mirrored = P, s, False
        else:
            if mirror is None:
                mirror = P.mirrored()
            Pw, mirrored = mirror, True
            sw = boundary_configuration(mirror, (-s.point.x, s.point.y), ccw=True)
        case = classify_start(Pw, sw, fil.is_empty)
        cases.append(case)
        route = Route(prefix, s)
        if case == "pocket":
            part = LdaPart(P, s.config, _side(s))
            part.routes = [route]
            parts.append(part)
            bentries.append((part.disk, s))
            continue
        if not fil.is_empty:
            core_routes.append(route)
        if case == "general":
            for f, (x1, xb, _) in edge_reductions(Pw, sw).items():
                groups.setdefault((mirrored, f), []).append((x1, xb, route))
    if core_routes:
        core = core_intersection(fil) if core is None else core
        cp = CoreComplementPart(P, core)
        cp.routes = core_routes
        if core.is_empty:
            # the whole polygon is covered; nothing else can add to it
            return [cp], [(d, None) for d in fil.extreme_disks], cases
        parts.insert(0, cp)
        bentries = [(d, None) for d in fil.extreme_disks] + bentries
    seen = {p.key: p for p in parts}
    for (mirrored, f) in sorted(groups):
        Pw = mirror if mirrored else P
        items = sorted(groups[(mirrored, f)], key=lambda it: it[0])
        k = 0
        while k < len(items):
            x1, xb, route = items[k]
            for x in sorted({x1, xb}):
                bc = _bc_at(Pw, f, x)
                if mirrored:
                    bc = _unmirror(bc, P)
                part = LdaPart(P, bc.config, _side(bc))
                if part.key in seen:
                    seen[part.key].routes.append(route)
                    continue
                part.routes = [route]
                seen[part.key] = part
                parts.append(part)
                bentries.append((part.disk, bc))
            k += 1
            while k < len(items) and items[k][0] <= xb + 1e-12:
                k += 1
    return parts, bentries, cases


def bfil(P: ConvexPolygon, s: BoundaryConfiguration, fil: Filling | None = None) -> Bfil:
    fil = compute_filling(P) if fil is None else fil
    _, entries, cases = collect_parts(P, [(s, None)], fil)
    return Bfil(entries, cases[0])


def blocking_config(P: ConvexPolygon, s1: BoundaryConfiguration) -> tuple[BoundaryConfiguration, bool]:
    """First configuration at or after ``s1`` on its edge whose left disk meets
    the forward chain beyond its own tangency point; ``found`` is False when
    the far end of the edge was reached instead."""
    if not s1.ccw:
        raise PreconditionViolated("blocking_config expects a counterclockwise configuration")
    x, found = blocking_position(P, s1.edge_index, s1.param)
    x = min(x, P.lengths[s1.edge_index])
    p = P.vertices[s1.edge_index] + x * P.directions[s1.edge_index]
    return BoundaryConfiguration(s1.edge_index, Point(*p), s1.dir, True, float(x)), found


def candidate_configurations(P: ConvexPolygon, s: BoundaryConfiguration) -> list[CandidateConfiguration]:
    """All valid disk positions on the forward chain that are tangent to two
    chain edges or tangent to one and pass through the first contact point."""
    if not s.ccw:
        raise PreconditionViolated("candidate_configurations expects a counterclockwise configuration")
    cs = np.asarray(side_disk(s.config, "left").center)
    if _chain_hits_disk(P, s, cs):
        raise PreconditionViolated("the forward chain meets the interior of the left disk")
    edges, _ = chain_edges(P, s.edge_index)
    chain = set(edges)
    dpt = first_contact_point(P, s)
    X = np.asarray([dpt]) if dpt is not None else np.zeros((0, 2))
    out = []
    for f in edges:
        lo = s.param if f == s.edge_index else VERTEX_GAP
        hi = P.lengths[f] - VERTEX_GAP
        for x, kind, g in _critical_positions(P, f, cs, X):
            if kind == "two_edge_tangent" and g not in chain:
                continue
            if not (lo - 1e-12 <= x <= hi):
                continue
            c = P.vertices[f] + x * P.directions[f] + P.normals[f]
            if disk_valid(P, cs, c):
                bc = _bc_at(P, f, x)
                out.append(CandidateConfiguration(bc, UnitDisk(Point(*c)), kind))
    out.sort(key=lambda k: (k.config.edge_index, k.config.param))
    return out


# ---------------------------------------------------------------------------
# assembling the region


@dataclass
class BoundaryReach:
    """Result of reachability from one boundary configuration.

    ``parts`` are region predicates (``LdaPart`` or ``CoreComplementPart``)
    whose union is the reachable set; ``bfil`` is the reduced disk set.
    """

    polygon: ConvexPolygon
    start: BoundaryConfiguration
    parts: list
    bfil: Bfil

    @property
    def case(self) -> str:
        return self.bfil.case

    def contains_mask(self, points, atol: float = 0.0) -> np.ndarray:
        return union_mask(self.parts, points, atol)

    def region(self) -> ArcGon:
        return parts_region(self.polygon, self.parts)


def union_mask(parts, points, atol: float = 0.0) -> np.ndarray:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    m = np.zeros(len(pts), dtype=bool)
    for p in parts:
        rest = ~m
        if rest.any():
            m[rest] = p.contains_mask(pts[rest], atol)
    return m


def parts_region(P: ConvexPolygon, parts) -> ArcGon:
    curves = [c for p in parts for c in p.curves()] + P.edges()
    return build_region(curves, lambda x: union_mask(parts, x))


def boundary_reach(P: ConvexPolygon, s: BoundaryConfiguration, fil: Filling | None = None, core: Core | None = None) -> BoundaryReach:
    fil = compute_filling(P) if fil is None else fil
    parts, entries, cases = collect_parts(P, [(s, None)], fil, core)
    return BoundaryReach(P, s, parts, Bfil(entries, cases[0]))


def reach_from_boundary(P: ConvexPolygon, s: BoundaryConfiguration, fil: Filling | None = None) -> ArcGon:
    """Reachable region from a boundary configuration."""
    return boundary_reach(P, s, fil).region()
