"""The filling of a convex polygon: all unit disks it contains, the pockets
left over, and the core shared by every such disk."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, ArcElement, Point, SegmentElement, UnitDisk, ccw_delta
from .polygon import ConvexPolygon
from .region import ArcGon, build_region


@dataclass(frozen=True)
class Filling:
    """``center_hull`` is the set of centres of unit disks inside the polygon.

    ``kind`` is one of ``"empty"``, ``"point"``, ``"segment"``, ``"polygon"``;
    ``extreme_disks`` are the disks centred at the hull vertices.
    """

    polygon: ConvexPolygon
    kind: str
    center_hull: list[Point]
    extreme_disks: list[UnitDisk]
    fil_region: ArcGon

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def centers(self) -> np.ndarray:
        return np.array([tuple(d.center) for d in self.extreme_disks], dtype=float).reshape(-1, 2)

    def contains_center(self, c, tol: float = 1e-7) -> bool:
        """Whether the unit disk centred at ``c`` lies inside the polygon."""
        P = self.polygon
        return bool(np.min(P.normals @ np.asarray(c, float) - P.offsets) >= 1.0 - tol)


@dataclass(frozen=True)
class Pocket:
    bounding_disk: UnitDisk
    arc: ArcElement
    chain: list[SegmentElement]
    mouth_points: tuple[Point, Point]
    mouth_edges: tuple[int, int] = (0, 0)

    @property
    def mouth_angle(self) -> float:
        return self.arc.extent

    def region(self) -> ArcGon:
        return ArcGon([self.chain + [self.arc.reversed()]])


@dataclass(frozen=True)
class Core:
    region: ArcGon
    centers: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))

    @property
    def is_empty(self) -> bool:
        return self.region.is_empty

    def interior_mask(self, points, erode: float = 0.0) -> np.ndarray:
        """Points strictly inside every extreme disk, by at least ``erode``."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if self.is_empty:
            return np.zeros(len(pts), dtype=bool)
        d = np.hypot(pts[:, None, 0] - self.centers[None, :, 0], pts[:, None, 1] - self.centers[None, :, 1])
        return np.all(d < 1.0 - erode, axis=1)


def _clip(poly: np.ndarray, n: np.ndarray, c: float) -> np.ndarray:
    """Keep the part of ``poly`` with ``n . p >= c``."""
    if len(poly) == 0:
        return poly
    out = []
    m = len(poly)
    val = poly @ n - c
    for k in range(m):
        p, q = poly[k], poly[(k + 1) % m]
        vp, vq = val[k], val[(k + 1) % m]
        if vp >= 0:
            out.append(p)
        if (vp >= 0) != (vq >= 0):
            t = vp / (vp - vq)
            out.append(p + t * (q - p))
    return np.array(out).reshape(-1, 2)


def _dedupe(pts: np.ndarray, tol: float) -> np.ndarray:
    keep: list[np.ndarray] = []
    for p in pts:
        if not keep or np.hypot(*(p - keep[-1])) > tol:
            keep.append(p)
    while len(keep) > 1 and np.hypot(*(keep[0] - keep[-1])) <= tol:
        keep.pop()
    return np.array(keep).reshape(-1, 2)


def _hull_kind(pts: np.ndarray, tol: float):
    if len(pts) == 0:
        return "empty", pts
    span = np.hypot(*(pts - pts[0]).T)
    if span.max() <= tol:
        return "point", pts[:1]
    far = pts[int(np.argmax(span))]
    u = (far - pts[0]) / np.hypot(*(far - pts[0]))
    perp = (pts - pts[0]) @ np.array([-u[1], u[0]])
    if np.abs(perp).max() <= tol:
        s = (pts - pts[0]) @ u
        return "segment", np.array([pts[int(np.argmin(s))], pts[int(np.argmax(s))]])
    # drop nearly collinear vertices so every hull vertex is a true corner
    keep = []
    m = len(pts)
    for k in range(m):
        a, b, c = pts[k - 1], pts[k], pts[(k + 1) % m]
        cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if cr > tol * max(np.hypot(*(b - a)), np.hypot(*(c - b)), 1.0):
            keep.append(b)
    return "polygon", np.array(keep)


def _offset_boundary(kind: str, hull: np.ndarray) -> ArcGon:
    if kind == "empty":
        return ArcGon()
    if kind == "point":
        return ArcGon.disk(hull[0])
    if kind == "segment":
        a, b = hull
        u = (b - a) / np.hypot(*(b - a))
        o = np.array([u[1], -u[0]])
        ang = math.atan2(o[1], o[0])
        return ArcGon(
            [
                [
                    SegmentElement(a + o, b + o),
                    ArcElement(b, ang, ang + math.pi, True),
                    SegmentElement(b - o, a - o),
                    ArcElement(a, ang + math.pi, ang, True),
                ]
            ]
        )
    m = len(hull)
    d = np.roll(hull, -1, axis=0) - hull
    d /= np.hypot(d[:, 0], d[:, 1])[:, None]
    out_n = np.column_stack((d[:, 1], -d[:, 0]))
    cyc = []
    for k in range(m):
        nk, nk1 = out_n[k], out_n[(k + 1) % m]
        v0, v1 = hull[k], hull[(k + 1) % m]
        cyc.append(SegmentElement(v0 + nk, v1 + nk))
        cyc.append(ArcElement(v1, math.atan2(nk[1], nk[0]), math.atan2(nk1[1], nk1[0]), True))
    return ArcGon([cyc])


def compute_filling(P: ConvexPolygon) -> Filling:
    """Offset ``P`` inward by 1; the result is the set of unit-disk centres."""
    # exact offset first; a relaxed one keeps touching-but-degenerate hulls
    for slack in (0.0, 1e-9):
        region = P.vertices.copy()
        for n, c in zip(P.normals, P.offsets):
            region = _clip(region, n, c + 1.0 - slack)
            if len(region) == 0:
                break
        if len(region):
            break
    region = _dedupe(region, 1e-9)
    kind, hull = _hull_kind(region, 1e-8)
    disks = [UnitDisk(Point(float(x), float(y))) for x, y in hull]
    return Filling(P, kind, [d.center for d in disks], disks, _offset_boundary(kind, hull))


def _touching_edges(P: ConvexPolygon, v: np.ndarray, tol: float = 1e-7) -> np.ndarray:
    h = P.normals @ v - P.offsets
    return np.flatnonzero(np.abs(h - 1.0) <= tol)


def _chain(P: ConvexPolygon, a: np.ndarray, ea: int, b: np.ndarray, eb: int) -> list[SegmentElement]:
    if ea == eb and np.dot(b - a, P.directions[ea]) >= 0:
        return [SegmentElement(a, b)]
    out = [SegmentElement(a, P.vertex(ea + 1))]
    j = (ea + 1) % P.n
    while j != eb:
        out.append(P.edge(j))
        j = (j + 1) % P.n
    out.append(SegmentElement(P.vertex(eb), b))
    return [s for s in out if s.length > 1e-12]


def compute_pockets(P: ConvexPolygon, fil: Filling) -> list[Pocket]:
    """Connected components of ``P`` minus the filling, one per gap between
    consecutive tangencies of an extreme disk that faces away from the hull."""
    if fil.is_empty:
        return []
    pockets = []
    centers = fil.centers
    for k, v in enumerate(centers):
        touch = _touching_edges(P, v)
        if len(touch) == 0:
            continue
        # direction from the centre to each tangency point
        ang = np.arctan2(-P.normals[touch, 1], -P.normals[touch, 0])
        order = np.argsort(ang)
        touch, ang = touch[order], ang[order]
        others = np.delete(centers, k, axis=0)
        m = len(touch)
        for i in range(m):
            a0, a1 = ang[i], ang[(i + 1) % m]
            gap = ccw_delta(a0, a1)
            if m == 1:
                gap = TWO_PI
            if gap <= 1e-9:
                continue
            mid = a0 + gap / 2.0
            md = np.array([math.cos(mid), math.sin(mid)])
            if len(others) and np.any((others - v) @ md > 1e-9):
                continue
            pa = v + np.array([math.cos(a0), math.sin(a0)])
            pb = v + np.array([math.cos(a1), math.sin(a1)])
            ea, eb = int(touch[i]), int(touch[(i + 1) % m])
            pockets.append(
                Pocket(
                    UnitDisk(Point(*v)),
                    ArcElement(v, a0, a1, True),
                    _chain(P, pa, ea, pb, eb),
                    (Point(*pa), Point(*pb)),
                    (ea, eb),
                )
            )
    return pockets


def core_intersection(fil: Filling) -> Core:
    """Intersection of all filling disks, computed from the extreme disks only."""
    if fil.is_empty:
        return Core(ArcGon())
    C = fil.centers
    D = np.hypot(C[:, None, 0] - C[None, :, 0], C[:, None, 1] - C[None, :, 1])
    if D.max() >= 2.0 - 1e-12:
        return Core(ArcGon(), C)
    if len(C) == 1:
        return Core(ArcGon.disk(C[0]), C)

    def inside_all(x):
        d2 = (x[:, None, 0] - C[None, :, 0]) ** 2 + (x[:, None, 1] - C[None, :, 1]) ** 2
        return np.all(d2 <= 1.0, axis=1)

    # only circles carrying a vertex of the intersection bound it
    i, j = np.triu_indices(len(C), 1)
    w = C[j] - C[i]
    d = np.hypot(w[:, 0], w[:, 1])
    ok = (d > 1e-12) & (d < 2.0)
    i, j, w, d = i[ok], j[ok], w[ok], d[ok]
    k = np.sqrt(np.clip(1.0 - d * d / 4.0, 0.0, None)) / d
    mid = 0.5 * (C[i] + C[j])
    perp = np.column_stack((-w[:, 1], w[:, 0])) * k[:, None]
    keep = set()
    for sgn in (1.0, -1.0):
        q = mid + sgn * perp
        good = np.ones(len(q), bool)
        for a in range(0, len(q), 4096):
            good[a : a + 4096] = np.all(
                (q[a : a + 4096, None, 0] - C[None, :, 0]) ** 2 + (q[a : a + 4096, None, 1] - C[None, :, 1]) ** 2
                <= 1.0 + 1e-9,
                axis=1,
            )
        keep |= set(i[good].tolist()) | set(j[good].tolist())
    circles = C[sorted(keep)] if keep else C
    return Core(build_region([ArcElement(c, 0.0, 0.0, True) for c in circles], inside_all), C)
