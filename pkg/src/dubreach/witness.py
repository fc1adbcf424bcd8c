"""Unit-curvature paths: Dubins shortest paths and witness paths to reachable points."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boundary_reach import CoreComplementPart, LdaPart
from .canonical import ReachResult, reach
from .errors import NoWitnessFound, StartOutsidePolygon, TargetOutsidePolygon
from .geometry import TWO_PI, Configuration, left_disk, right_disk
from .polygon import ConvexPolygon

TURN_SIGN = {"L": 1.0, "R": -1.0}


@dataclass(frozen=True)
class Primitive:
    """``kind`` is ``"L"``, ``"R"`` (value = turned angle) or ``"S"`` (value = length)."""

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("L", "R", "S"):
            raise ValueError(f"unknown primitive {self.kind!r}")
        if self.value < 0.0:
            raise ValueError("primitive lengths are nonnegative")

    @property
    def length(self) -> float:
        return self.value

    def advance(self, x: float, y: float, th: float, frac: float = 1.0) -> tuple[float, float, float]:
        h = self.value * frac
        if self.kind == "S":
            return x + h * math.cos(th), y + h * math.sin(th), th
        k = TURN_SIGN[self.kind]
        t1 = th + k * h
        return x + (math.sin(t1) - math.sin(th)) / k, y - (math.cos(t1) - math.cos(th)) / k, t1


@dataclass(frozen=True)
class CurvaturePath:
    start: Configuration
    primitives: tuple[Primitive, ...]

    @property
    def length(self) -> float:
        return sum(p.length for p in self.primitives)

    @property
    def schema(self) -> str:
        return "".join(p.kind for p in self.primitives)

    @property
    def end(self) -> Configuration:
        x, y, th = self.start.point.x, self.start.point.y, self.start.heading
        for p in self.primitives:
            x, y, th = p.advance(x, y, th)
        return Configuration.from_pose(x, y, th)

    def normalized(self) -> "CurvaturePath":
        """Drop zero-length primitives and join consecutive ones of the same kind."""
        out: list[Primitive] = []
        for p in self.primitives:
            if p.value <= 1e-12:
                continue
            if out and out[-1].kind == p.kind:
                out[-1] = Primitive(p.kind, out[-1].value + p.value)
            else:
                out.append(p)
        return CurvaturePath(self.start, tuple(out))

    def sample(self, step: float = 1e-3) -> np.ndarray:
        x, y, th = self.start.point.x, self.start.point.y, self.start.heading
        chunks = [np.array([[x, y]])]
        for p in self.primitives:
            n = max(1, int(math.ceil(p.length / step)))
            fr = np.arange(1, n + 1) / n
            h = p.value * fr
            if p.kind == "S":
                pts = np.column_stack((x + h * math.cos(th), y + h * math.sin(th)))
            else:
                k = TURN_SIGN[p.kind]
                t1 = th + k * h
                pts = np.column_stack((x + (np.sin(t1) - math.sin(th)) / k, y - (np.cos(t1) - math.cos(th)) / k))
            chunks.append(pts)
            x, y, th = p.advance(x, y, th)
        return np.vstack(chunks)

    def to_dict(self) -> dict:
        recs = []
        for p in self.primitives:
            if p.kind == "S":
                recs.append({"type": "straight", "length": p.value})
            else:
                recs.append({"type": "arc", "turn": p.kind, "angle": p.value})
        return {
            "start": {"point": [self.start.point.x, self.start.point.y], "heading_radians": self.start.heading},
            "primitives": recs,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CurvaturePath":
        st = data["start"]
        prims = []
        for r in data["primitives"]:
            if r["type"] == "straight":
                prims.append(Primitive("S", float(r["length"])))
            else:
                prims.append(Primitive(r["turn"], float(r["angle"])))
        return cls(Configuration.from_pose(st["point"][0], st["point"][1], st["heading_radians"]), tuple(prims))


@dataclass(frozen=True)
class PathValidation:
    max_curvature_violation: float
    max_polygon_violation: float
    endpoint_error: float

    def ok(self, tol: float) -> bool:
        return max(self.max_curvature_violation, self.max_polygon_violation, self.endpoint_error) <= tol


def validate_path(P: ConvexPolygon, path: CurvaturePath, target=None, step: float = 1e-3) -> PathValidation:
    """Sample the path every ``step`` of arclength and measure how far it
    leaves ``P``.  Every arc has radius 1, so curvature never exceeds 1."""
    pts = path.sample(step)
    sd = P.signed_distance(pts)
    viol = float(max(0.0, -sd.min()))
    err = 0.0
    if target is not None:
        e = path.end.point
        err = math.hypot(e.x - target[0], e.y - target[1])
    return PathValidation(0.0, viol, err)


# ---------------------------------------------------------------------------
# Dubins paths


def _mod(a: float) -> float:
    a = math.fmod(a, TWO_PI)
    if a < 0:
        a += TWO_PI
    return 0.0 if a > TWO_PI - 1e-12 else a


def dubins_candidates(a: Configuration, b: Configuration) -> dict[str, tuple[float, float, float]]:
    """Closed-form segment parameters ``(t, p, q)`` of every feasible family."""
    dx, dy = b.point.x - a.point.x, b.point.y - a.point.y
    d = math.hypot(dx, dy)
    theta = math.atan2(dy, dx) if d > 0 else 0.0
    al, be = _mod(a.heading - theta), _mod(b.heading - theta)
    sa, sb, ca, cb = math.sin(al), math.sin(be), math.cos(al), math.cos(be)
    cab = math.cos(al - be)
    out = {}
    p2 = 2 + d * d - 2 * cab + 2 * d * (sa - sb)
    if p2 >= 0:
        tmp = math.atan2(cb - ca, d + sa - sb)
        out["LSL"] = (_mod(-al + tmp), math.sqrt(p2), _mod(be - tmp))
    p2 = 2 + d * d - 2 * cab + 2 * d * (sb - sa)
    if p2 >= 0:
        tmp = math.atan2(ca - cb, d - sa + sb)
        out["RSR"] = (_mod(al - tmp), math.sqrt(p2), _mod(-be + tmp))
    p2 = -2 + d * d + 2 * cab + 2 * d * (sa + sb)
    if p2 >= 0:
        p = math.sqrt(p2)
        tmp = math.atan2(-ca - cb, d + sa + sb) - math.atan2(-2.0, p)
        out["LSR"] = (_mod(-al + tmp), p, _mod(-be + tmp))
    p2 = d * d - 2 + 2 * cab - 2 * d * (sa + sb)
    if p2 >= 0:
        p = math.sqrt(p2)
        tmp = math.atan2(ca + cb, d - sa - sb) - math.atan2(2.0, p)
        out["RSL"] = (_mod(al - tmp), p, _mod(be - tmp))
    c = (6.0 - d * d + 2 * cab + 2 * d * (sa - sb)) / 8.0
    if abs(c) <= 1.0:
        p = _mod(TWO_PI - math.acos(c))
        t = _mod(al - math.atan2(ca - cb, d - sa + sb) + p / 2.0)
        out["RLR"] = (t, p, _mod(al - be - t + p))
    c = (6.0 - d * d + 2 * cab + 2 * d * (sb - sa)) / 8.0
    if abs(c) <= 1.0:
        p = _mod(TWO_PI - math.acos(c))
        t = _mod(-al - math.atan2(ca - cb, d + sa - sb) + p / 2.0)
        out["LRL"] = (t, p, _mod(be - al - t + p))
    return out


def _family_path(a: Configuration, fam: str, tpq) -> CurvaturePath:
    return CurvaturePath(a, tuple(Primitive(k, v) for k, v in zip(fam, tpq)))


def dubins_shortest(a: Configuration, b: Configuration) -> CurvaturePath:
    """Shortest unit-curvature forward path from ``a`` to ``b`` in the free plane."""
    best = None
    for fam, tpq in dubins_candidates(a, b).items():
        # a three-arc path is only a candidate when its middle arc exceeds a half turn
        if fam in ("LRL", "RLR") and tpq[1] <= math.pi:
            continue
        path = _family_path(a, fam, tpq)
        e = path.end
        if math.hypot(e.point.x - b.point.x, e.point.y - b.point.y) > 1e-6:
            continue
        if abs(math.remainder(e.heading - b.heading, TWO_PI)) > 1e-6:
            continue
        if best is None or path.length < best.length - 1e-12:
            best = path
    if best is None:
        raise RuntimeError("no Dubins family reached the goal")
    return best


# ---------------------------------------------------------------------------
# witness paths


@dataclass(frozen=True)
class _LeadIn:
    """Primitives driven before reaching ``point`` on the oriented circle ``center``/``sense``."""

    prefix: tuple[Primitive, ...]
    center: np.ndarray
    sense: float
    point: np.ndarray
    tag: object


def _sweep(center, sense: float, p_from, p_to) -> float:
    a0 = math.atan2(p_from[1] - center[1], p_from[0] - center[0])
    a1 = math.atan2(p_to[1] - center[1], p_to[0] - center[0])
    return _mod(sense * (a1 - a0))


def _tangent(c1, s1: float, c2, s2: float):
    """Directed tangent segment leaving circle 1 and joining circle 2 with the
    given rotation senses, or None."""
    w = c2 - c1
    D = math.hypot(*w)
    if s1 == s2:
        if D < 1e-12:
            return None
        u = w / D
    else:
        if D < 2.0 - 1e-12:
            return None
        psi = math.atan2(w[1], w[0]) - math.asin(max(-1.0, min(1.0, (s2 - s1) / D)))
        u = np.array([math.cos(psi), math.sin(psi)])
    p1 = c1 + s1 * np.array([u[1], -u[0]])
    p2 = c2 + s2 * np.array([u[1], -u[0]])
    return p1, p2


def _aim(center, sense: float, t):
    """Point on the oriented circle whose tangent ray passes through ``t``."""
    rel = np.asarray(t) - center
    r2 = rel @ rel
    if r2 < 1.0 - 1e-12:
        return None
    L = math.sqrt(max(r2 - 1.0, 0.0))
    a = math.atan2(rel[1], rel[0]) - sense * math.atan(L)
    return center + np.array([math.cos(a), math.sin(a)]), L


def _kind(sense: float) -> str:
    return "L" if sense > 0 else "R"


def _via(lead: _LeadIn, c2, s2: float, t) -> tuple[Primitive, ...] | None:
    """Lead-in, arc to a tangent onto circle ``c2``, segment, arc, segment to ``t``."""
    aim = _aim(c2, s2, t)
    if aim is None:
        return None
    p3, L3 = aim
    if np.hypot(*(c2 - lead.center)) < 1e-12 and s2 == lead.sense:
        return lead.prefix + (
            Primitive(_kind(s2), _sweep(c2, s2, lead.point, p3)),
            Primitive("S", L3),
        )
    tan = _tangent(lead.center, lead.sense, c2, s2)
    if tan is None:
        return None
    p1, p2 = tan
    return lead.prefix + (
        Primitive(_kind(lead.sense), _sweep(lead.center, lead.sense, lead.point, p1)),
        Primitive("S", float(np.hypot(*(p2 - p1)))),
        Primitive(_kind(s2), _sweep(c2, s2, p2, p3)),
        Primitive("S", L3),
    )


def _lead_ins(rr: ReachResult) -> list[_LeadIn]:
    s = rr.start
    p = np.asarray(s.point)
    out = []
    if rr.boundary_start is not None:
        bc = rr.boundary_start
        d = left_disk(bc.config) if bc.ccw else right_disk(bc.config)
        out.append(_LeadIn((), np.asarray(d.center), 1.0 if bc.ccw else -1.0, p, bc))
        return out
    out.append(_LeadIn((), np.asarray(left_disk(s).center), 1.0, p, "L"))
    out.append(_LeadIn((), np.asarray(right_disk(s).center), -1.0, p, "R"))
    for cs in rr.canonical:
        first = Primitive(cs.kind[0], cs.first_angle)
        arc2 = cs.second_arc
        out.append(_LeadIn((first,), np.asarray(arc2.center), arc2.sign, np.asarray(arc2.start), cs))
    return out


def _targets(part, t) -> list[tuple[np.ndarray, float]]:
    if isinstance(part, LdaPart):
        return [(part.center, part.sense)]
    if isinstance(part, CoreComplementPart):
        out = []
        for c in part.core.centers if len(part.core.centers) else []:
            if np.hypot(*(np.asarray(t) - c)) >= 1.0 - 1e-9:
                out += [(np.asarray(c), 1.0), (np.asarray(c), -1.0)]
        return out
    return []


def _route_tags(part) -> list:
    tags = []
    for r in getattr(part, "routes", []):
        if r.prefix is not None:
            tags.append(r.prefix)
        elif r.entry is not None:
            tags.append(r.entry)
    return tags


def witness_path(
    P: ConvexPolygon,
    s: Configuration,
    t,
    result: ReachResult | None = None,
    tol: float | None = None,
) -> CurvaturePath | None:
    """A validated path of at most five pieces (arc, arc, segment, arc, segment)
    from ``s`` to ``t``, or None when ``t`` is not reachable."""
    tol = P.tol.tol_band if tol is None else tol
    if P.signed_distance(s.point)[0] < -P.tol.tol_band:
        raise StartOutsidePolygon(f"start {tuple(s.point)} lies outside the polygon")
    tp = np.asarray(t, dtype=float)
    if P.signed_distance(tp)[0] < -P.tol.tol_band:
        raise TargetOutsidePolygon(f"target {tuple(tp)} lies outside the polygon")
    rr = reach(P, s) if result is None else result
    parts = rr.parts_containing(tp)
    if not parts:
        return None
    leads = _lead_ins(rr)

    def attempt(lead: _LeadIn, c2, s2):
        prims = _via(lead, c2, s2, tp)
        if prims is None:
            return None
        path = CurvaturePath(s, prims)
        if validate_path(P, path, tp).ok(tol):
            return path
        return None

    # arc and segment straight from the start first
    for lead in leads:
        if lead.prefix:
            continue
        path = attempt(lead, lead.center, lead.sense)
        if path is not None:
            return path
    tried = set()
    for part in parts:
        tags = _route_tags(part)
        ordered = [ld for ld in leads if any(ld.tag is g for g in tags)] + [ld for ld in leads if not any(ld.tag is g for g in tags)]
        for c2, s2 in _targets(part, tp):
            for lead in ordered:
                key = (id(lead), round(float(c2[0]), 12), round(float(c2[1]), 12), s2)
                if key in tried:
                    continue
                tried.add(key)
                path = attempt(lead, c2, s2)
                if path is not None:
                    return path
    # last resort: single arc and segment from every canonical lead-in
    for lead in leads:
        if not lead.prefix:
            continue
        path = attempt(lead, lead.center, lead.sense)
        if path is not None:
            return path
    raise NoWitnessFound(f"target {tuple(tp)} is inside the reachable region but no path validated")
