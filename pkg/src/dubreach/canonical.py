"""Reachability from an arbitrary start.

A start inside the polygon reaches points either directly (one arc and one
segment) or by first driving a two-arc prefix that ends tangent to the
boundary; everything beyond such a prefix is handled by the boundary
machinery.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .boundary_reach import CoreComplementPart, LdaPart, LdaRegion, Route, VERTEX_GAP, collect_parts, parts_region, union_mask
from .errors import StartOutsidePolygon
from .filling import Core, Filling, compute_filling
from .geometry import TWO_PI, ArcElement, Configuration, Direction, Point, ccw_delta, left_disk, right_disk
from .polygon import BoundaryConfiguration, ConvexPolygon, arc_exit_angle, as_boundary_configuration
from .region import ArcGon


@dataclass(frozen=True)
class DaRegion:
    left: LdaRegion
    right: LdaRegion
    union_region: ArcGon


def _check_start(P: ConvexPolygon, s: Configuration) -> None:
    if P.signed_distance(s.point)[0] < -P.tol.tol_band:
        raise StartOutsidePolygon(f"start {tuple(s.point)} lies outside the polygon")


def direct_access(P: ConvexPolygon, s: Configuration) -> DaRegion:
    _check_start(P, s)
    parts = [LdaPart(P, s, "left"), LdaPart(P, s, "right")]
    regions = [LdaRegion(s, p.side, p.region(), p.phi_max, p) for p in parts]
    return DaRegion(regions[0], regions[1], parts_region(P, parts))


@dataclass(frozen=True)
class CanonicalStart:
    """Two tangent unit arcs from the start to a tangency with edge ``edge_index``.

    ``first_angle`` and ``second_angle`` are the exact sweeps; an arc element
    with coinciding endpoints stands for a zero sweep.

    ``kind`` is ``"RL"`` (right turn, then left) or ``"LR"``.
    """

    kind: str
    first_arc: ArcElement
    second_arc: ArcElement
    end: BoundaryConfiguration
    edge_index: int
    first_angle: float = 0.0
    second_angle: float = 0.0

    @property
    def mid(self) -> Configuration:
        """Configuration where the two arcs meet."""
        p = self.second_arc.start
        return Configuration(p, self.second_arc.tangent_at(0.0))


def _arc(center, a0: float, delta: float, ccw: bool) -> ArcElement:
    a1 = a0 + delta if ccw else a0 - delta
    return ArcElement(center, a0, a1, ccw)


def canonical_starts(P: ConvexPolygon, s: Configuration) -> list[CanonicalStart]:
    """All two-arc prefixes from ``s`` ending tangent to an edge, arcs inside ``P``."""
    _check_start(P, s)
    out = []
    tol = 1e-9
    for kind in ("RL", "LR"):
        first = right_disk(s) if kind == "RL" else left_disk(s)
        c1 = np.asarray(first.center)
        sense1 = -1.0 if kind == "RL" else 1.0
        a_s = math.atan2(s.point.y - c1[1], s.point.x - c1[0])
        exit1 = arc_exit_angle(P, c1, a_s, sense1)
        for f in range(P.n):
            n, d = P.normals[f], P.directions[f]
            # second centre: on the inward offset line of f, at distance 2 from c1
            base = P.vertices[f] + n
            rel = c1 - base
            b = rel @ d
            disc = b * b - (rel @ rel - 4.0)
            if disc < -1e-12:
                continue
            r = math.sqrt(max(disc, 0.0))
            for x in sorted({b - r, b + r}):
                if not (VERTEX_GAP < x < P.lengths[f] - VERTEX_GAP):
                    continue
                c2 = base + x * d
                m = 0.5 * (c1 + c2)
                a_m1 = math.atan2(m[1] - c1[1], m[0] - c1[0])
                delta1 = ccw_delta(a_m1, a_s) if sense1 < 0 else ccw_delta(a_s, a_m1)
                if delta1 > TWO_PI - 1e-9:
                    delta1 = 0.0
                if delta1 > exit1 + tol:
                    continue
                a_m2 = math.atan2(m[1] - c2[1], m[0] - c2[0])
                # second arc turns the other way; it ends where the disk touches f
                a_t = math.atan2(-n[1], -n[0])
                sense2 = -sense1
                delta2 = ccw_delta(a_m2, a_t) if sense2 > 0 else ccw_delta(a_t, a_m2)
                if delta2 > TWO_PI - 1e-9:
                    delta2 = 0.0
                if delta2 > tol and delta2 > arc_exit_angle(P, c2, a_m2, sense2) + tol:
                    continue
                p_end = Point(*(base + x * d - n))
                if kind == "RL":
                    end = BoundaryConfiguration(f, p_end, Direction(*d), True, float(x))
                else:
                    end = BoundaryConfiguration(f, p_end, -Direction(*d), False, float(x))
                out.append(
                    CanonicalStart(
                        kind,
                        _arc(c1, a_s, delta1, sense1 > 0),
                        _arc(c2, a_m2, delta2, sense2 > 0),
                        end,
                        f,
                        float(delta1),
                        float(delta2),
                    )
                )
    out.sort(key=lambda cs: (cs.edge_index, cs.kind, cs.end.param))
    return out


@dataclass
class ReachResult:
    """Reachable set of a start configuration.

    ``parts`` are exact region predicates; ``region`` is their union as an
    arc-polygon, built on first access.
    """

    polygon: ConvexPolygon
    start: Configuration
    parts: list
    canonical: list[CanonicalStart]
    filling: Filling
    bfil_size: int
    boundary_start: BoundaryConfiguration | None = None
    elapsed: float = 0.0
    _region: ArcGon | None = field(default=None, repr=False)

    @property
    def region(self) -> ArcGon:
        if self._region is None:
            self._region = parts_region(self.polygon, self.parts)
        return self._region

    def contains_mask(self, points, atol: float = 0.0) -> np.ndarray:
        return union_mask(self.parts, points, atol)

    def classify(self, points, band: float | None = None) -> np.ndarray:
        band = self.polygon.tol.tol_band if band is None else band
        return self.region.classify(points, band)

    def parts_containing(self, p, atol: float = 1e-9) -> list:
        q = np.asarray(p, dtype=float).reshape(1, 2)
        return [part for part in self.parts if part.contains_mask(q, atol)[0]]

    @property
    def arc_count(self) -> int:
        return self.region.n_arcs


def reach(P: ConvexPolygon, s: Configuration, fil: Filling | None = None, core: Core | None = None) -> ReachResult:
    """Reachable region from ``s``.

    Starts tangent to the boundary in either direction go straight to the
    boundary machinery; all others combine direct access with every
    canonical start.
    """
    t0 = time.perf_counter()
    _check_start(P, s)
    fil = compute_filling(P) if fil is None else fil
    bc = as_boundary_configuration(P, s)
    if bc is not None:
        parts, entries, _ = collect_parts(P, [(bc, None)], fil, core)
        return ReachResult(P, s, parts, [], fil, len(entries), bc, time.perf_counter() - t0)
    parts: list = []
    for side in ("left", "right"):
        part = LdaPart(P, s, side)
        part.routes = [Route(None, None)]
        parts.append(part)
    starts = canonical_starts(P, s)
    extra, entries, _ = collect_parts(P, [(cs.end, cs) for cs in starts], fil, core)
    if extra and isinstance(extra[0], CoreComplementPart) and extra[0].core.is_empty:
        parts = extra
    else:
        parts += extra
    return ReachResult(P, s, parts, starts, fil, len(entries), None, time.perf_counter() - t0)
