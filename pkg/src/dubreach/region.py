"""Regions bounded by line segments and unit-circle arcs.

An :class:`ArcGon` is a list of closed boundary cycles.  Outer cycles run
counterclockwise and holes clockwise, so the region always lies to the left
of its boundary.

Boolean combinations are computed from an arrangement: every candidate
boundary curve is split at all pairwise intersections, each piece is
classified by probing the combined membership predicate on both sides of its
midpoint, and the pieces that separate inside from outside are chained back
into cycles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .geometry import DEFAULT_TOL, TWO_PI, ArcElement, SegmentElement, ccw_delta

Element = ArcElement | SegmentElement

# arrangement tolerances, in length units (all arcs have radius 1)
SNAP = 1e-9
MERGE = 1e-7
PROBE = 2e-7


@dataclass(frozen=True)
class MembershipResult:
    value: str  # "inside" | "outside" | "boundary_band"

    def __eq__(self, other):
        if isinstance(other, str):
            return self.value == other
        return isinstance(other, MembershipResult) and other.value == self.value

    def __hash__(self):
        return hash(self.value)

    def __str__(self) -> str:
        return self.value


class ArcGon:
    def __init__(self, cycles: Sequence[Sequence[Element]] = ()):
        self.cycles: list[list[Element]] = [list(c) for c in cycles if len(c)]
        self._pieces = None

    def __repr__(self) -> str:
        return f"ArcGon({len(self.cycles)} cycles, {self.n_arcs} arcs, {self.n_segments} segments)"

    @classmethod
    def from_polygon(cls, vertices) -> "ArcGon":
        v = np.asarray(vertices, dtype=float)
        n = len(v)
        return cls([[SegmentElement(v[i], v[(i + 1) % n]) for i in range(n)]])

    @classmethod
    def disk(cls, center) -> "ArcGon":
        return cls([[ArcElement(center, 0.0, 0.0, True)]])

    @property
    def is_empty(self) -> bool:
        return not self.cycles

    def elements(self) -> list[Element]:
        return [e for c in self.cycles for e in c]

    def arcs(self) -> list[ArcElement]:
        return [e for e in self.elements() if isinstance(e, ArcElement)]

    @property
    def n_arcs(self) -> int:
        return len(self.arcs())

    @property
    def n_segments(self) -> int:
        return sum(isinstance(e, SegmentElement) for e in self.elements())

    def arc_circles(self, tol: float = MERGE) -> dict[tuple[float, float], int]:
        """Number of arcs contributed by each distinct supporting circle."""
        out: dict[tuple[float, float], int] = {}
        keys: list[np.ndarray] = []
        for a in self.arcs():
            c = np.asarray(a.center)
            for k in keys:
                if np.hypot(*(k - c)) <= tol:
                    out[(float(k[0]), float(k[1]))] += 1
                    break
            else:
                keys.append(c)
                out[(float(c[0]), float(c[1]))] = 1
        return out

    # -- measurement -------------------------------------------------------

    def area(self) -> float:
        total = 0.0
        for e in self.elements():
            if isinstance(e, SegmentElement):
                total += 0.5 * (e.a.x * e.b.y - e.b.x * e.a.y)
            else:
                t1 = e.from_angle
                t2 = t1 + e.sign * e.extent
                cx, cy = e.center
                total += 0.5 * (
                    (t2 - t1) + cx * (math.sin(t2) - math.sin(t1)) - cy * (math.cos(t2) - math.cos(t1))
                )
        return total

    def bbox(self) -> tuple[float, float, float, float]:
        pts = np.vstack([e.sample(9) for e in self.elements()])
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def closure_error(self) -> float:
        worst = 0.0
        for c in self.cycles:
            for e, f in zip(c, c[1:] + c[:1]):
                worst = max(worst, e.end.dist(f.start))
        return worst

    # -- membership ---------------------------------------------------------

    def _monotone_pieces(self):
        """Split the boundary into y-monotone pieces for crossing counts."""
        if self._pieces is not None:
            return self._pieces
        segs, arcs = [], []
        for e in self.elements():
            if isinstance(e, SegmentElement):
                segs.append((e.a.x, e.a.y, e.b.x, e.b.y))
                continue
            # work in ccw orientation; orientation does not matter for parity
            lo = e.from_angle if e.ccw else e.to_angle
            ext = e.extent
            cuts = [0.0]
            for crit in (math.pi / 2, -math.pi / 2):
                d = ccw_delta(lo, crit)
                if 0.0 < d < ext:
                    cuts.append(d)
            cuts = sorted(cuts) + [ext]
            for a, b in zip(cuts, cuts[1:]):
                if b - a > 0.0:
                    arcs.append((e.center.x, e.center.y, lo + a, lo + b))
        self._pieces = (np.array(segs).reshape(-1, 4), np.array(arcs).reshape(-1, 4))
        return self._pieces

    def contains_mask(self, points) -> np.ndarray:
        """Even-odd membership of each point (boundary points arbitrary)."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        px, py = pts[:, 0], pts[:, 1]
        inside = np.zeros(len(pts), dtype=bool)
        segs, arcs = self._monotone_pieces()
        for x0, y0, x1, y1 in segs:
            cross = (y0 > py) != (y1 > py)
            if not cross.any():
                continue
            with np.errstate(divide="ignore", invalid="ignore"):
                xi = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
            inside ^= cross & (xi > px)
        for cx, cy, a0, a1 in arcs:
            y0, y1 = cy + math.sin(a0), cy + math.sin(a1)
            cross = (y0 > py) != (y1 > py)
            if not cross.any():
                continue
            # the piece lies on the right half of the circle iff its mid-angle has cos >= 0
            right = math.cos(0.5 * (a0 + a1)) >= 0.0
            dy = np.clip(py - cy, -1.0, 1.0)
            dx = np.sqrt(1.0 - dy * dy)
            xi = cx + dx if right else cx - dx
            inside ^= cross & (xi > px)
        return inside

    def distance_to_boundary(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        best = np.full(len(pts), np.inf)
        for e in self.elements():
            if isinstance(e, SegmentElement):
                a = np.asarray(e.a)
                ab = np.asarray(e.b) - a
                L2 = float(ab @ ab)
                t = np.clip(((pts - a) @ ab) / L2, 0.0, 1.0) if L2 > 0 else np.zeros(len(pts))
                d = np.hypot(*(pts - (a + t[:, None] * ab)).T)
            else:
                c = np.asarray(e.center)
                rel = pts - c
                r = np.hypot(rel[:, 0], rel[:, 1])
                lo = e.from_angle if e.ccw else e.to_angle
                off = np.mod(np.arctan2(rel[:, 1], rel[:, 0]) - lo, TWO_PI)
                on = off <= e.extent
                dend = np.minimum(
                    np.hypot(*(pts - np.asarray(e.start)).T), np.hypot(*(pts - np.asarray(e.end)).T)
                )
                d = np.where(on, np.abs(r - 1.0), dend)
            best = np.minimum(best, d)
        return best

    def classify(self, points, band: float = DEFAULT_TOL.tol_band) -> np.ndarray:
        """Vectorised membership: 1 inside, 0 boundary band, -1 outside."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        out = np.where(self.contains_mask(pts), 1, -1)
        if self.cycles:
            out[self.distance_to_boundary(pts) < band] = 0
        return out

    def contains(self, p, band: float = DEFAULT_TOL.tol_band) -> MembershipResult:
        v = int(self.classify([p], band)[0])
        return MembershipResult({1: "inside", 0: "boundary_band", -1: "outside"}[v])

    # -- serialisation --------------------------------------------------------

    def to_dict(self) -> list[list[dict]]:
        return [[element_to_dict(e) for e in c] for c in self.cycles]

    @classmethod
    def from_dict(cls, data) -> "ArcGon":
        return cls([[element_from_dict(r) for r in c] for c in data])


def element_to_dict(e: Element) -> dict:
    if isinstance(e, SegmentElement):
        return {"type": "segment", "a": [e.a.x, e.a.y], "b": [e.b.x, e.b.y]}
    return {
        "type": "arc",
        "center": [e.center.x, e.center.y],
        "from_angle": e.from_angle,
        "to_angle": e.to_angle,
        "ccw": e.ccw,
    }


def element_from_dict(r: dict) -> Element:
    if r["type"] == "segment":
        return SegmentElement(tuple(r["a"]), tuple(r["b"]))
    if r["type"] == "arc":
        return ArcElement(tuple(r["center"]), r["from_angle"], r["to_angle"], bool(r["ccw"]))
    raise ValueError(f"unknown element type {r['type']!r}")


# ---------------------------------------------------------------------------
# arrangement construction


def _canonical_curves(curves: Iterable[Element]):
    """Merge overlapping collinear segments and co-circular arcs.

    Returns segments as rows ``(ax, ay, bx, by)`` and arcs as rows
    ``(cx, cy, start, extent)`` in ccw orientation.
    """
    segs, arcs = [], []
    for e in curves:
        if isinstance(e, SegmentElement):
            if e.length > SNAP:
                segs.append((e.a.x, e.a.y, e.b.x, e.b.y))
        else:
            lo = e.from_angle if e.ccw else e.to_angle
            arcs.append((e.center.x, e.center.y, lo, e.extent))
    return _merge_segments(np.array(segs).reshape(-1, 4)), _merge_arcs(np.array(arcs).reshape(-1, 4))


def _groups(keys: np.ndarray, r: float) -> np.ndarray:
    if len(keys) == 0:
        return np.zeros(0, dtype=int)
    pairs = cKDTree(keys).query_pairs(r, output_type="ndarray")
    n = len(keys)
    g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    return connected_components(g, directed=False)[1]


def _merge_segments(S: np.ndarray) -> np.ndarray:
    if len(S) == 0:
        return S
    d = S[:, 2:] - S[:, :2]
    theta = np.mod(np.arctan2(d[:, 1], d[:, 0]), math.pi)
    theta = np.where(theta > math.pi - 1e-10, 0.0, theta)
    u = np.column_stack((np.cos(theta), np.sin(theta)))
    off = S[:, 0] * -u[:, 1] + S[:, 1] * u[:, 0]
    # scale the angle so that a unit of key distance is comparable to length
    labels = _groups(np.column_stack((theta * 100.0, off)), MERGE)
    out = []
    for g in np.unique(labels):
        idx = np.flatnonzero(labels == g)
        uu = u[idx[0]]
        base = S[idx[0], :2]
        t0 = (S[idx, :2] - base) @ uu
        t1 = (S[idx, 2:] - base) @ uu
        lo, hi = np.minimum(t0, t1), np.maximum(t0, t1)
        order = np.argsort(lo)
        cur_lo, cur_hi = lo[order[0]], hi[order[0]]
        for k in order[1:]:
            if lo[k] <= cur_hi + MERGE:
                cur_hi = max(cur_hi, hi[k])
            else:
                out.append((*(base + cur_lo * uu), *(base + cur_hi * uu)))
                cur_lo, cur_hi = lo[k], hi[k]
        out.append((*(base + cur_lo * uu), *(base + cur_hi * uu)))
    return np.array(out).reshape(-1, 4)


def _merge_arcs(A: np.ndarray) -> np.ndarray:
    if len(A) == 0:
        return A
    labels = _groups(A[:, :2], MERGE)
    out = []
    for g in np.unique(labels):
        idx = np.flatnonzero(labels == g)
        cx, cy = A[idx[0], :2]
        ext = A[idx, 3]
        if np.any(ext >= TWO_PI - 1e-12):
            out.append((cx, cy, 0.0, TWO_PI))
            continue
        starts = np.mod(A[idx, 2], TWO_PI)
        order = np.argsort(starts)
        ivs = [[starts[k], starts[k] + ext[k]] for k in order]
        merged = [ivs[0]]
        for lo, hi in ivs[1:]:
            if lo <= merged[-1][1] + 1e-9:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        # wrap-around join
        if len(merged) > 1 and merged[-1][1] >= merged[0][0] + TWO_PI - 1e-9:
            last = merged.pop()
            merged[0] = [last[0], max(last[1], merged[0][1] + TWO_PI)]
        for lo, hi in merged:
            out.append((cx, cy, lo, min(hi - lo, TWO_PI)))
    return np.array(out).reshape(-1, 4)


def _arc_offset(angle: np.ndarray, start: np.ndarray, ext: np.ndarray):
    """Parameter (angle past start) of ``angle`` on an arc, or NaN if off it."""
    off = np.mod(angle - start, TWO_PI)
    off = np.where(off > TWO_PI - 1e-9, 0.0, off)
    return np.where(off <= ext + 1e-9, np.minimum(off, ext), np.nan)


def _intersections(S: np.ndarray, A: np.ndarray):
    """All pairwise intersection parameters.

    Returns ``(curve_id, param, x, y)`` arrays where curve ids index segments
    first and arcs after them.
    """
    ns = len(S)
    cid, par, xs, ys = [], [], [], []

    def add(ids, params, x, y):
        ok = ~np.isnan(params)
        cid.append(ids[ok])
        par.append(params[ok])
        xs.append(x[ok])
        ys.append(y[ok])

    # segment / segment
    if ns > 1:
        a, b = S[:, :2], S[:, 2:]
        r = b - a
        L = np.hypot(r[:, 0], r[:, 1])
        lo = np.minimum(a, b) - SNAP
        hi = np.maximum(a, b) + SNAP
        for i0 in range(0, ns, 256):
            i1 = min(ns, i0 + 256)
            I = np.arange(i0, i1)[:, None]
            J = np.arange(ns)[None, :]
            box = (
                (lo[I, 0] <= hi[J, 0]) & (lo[J, 0] <= hi[I, 0]) & (lo[I, 1] <= hi[J, 1]) & (lo[J, 1] <= hi[I, 1])
            ) & (J > I)
            ii, jj = np.nonzero(box)
            ii = ii + i0
            if len(ii) == 0:
                continue
            ri, rj = r[ii], r[jj]
            den = ri[:, 0] * rj[:, 1] - ri[:, 1] * rj[:, 0]
            ok = np.abs(den) > 1e-13 * L[ii] * L[jj]
            ii, jj, ri, rj, den = ii[ok], jj[ok], ri[ok], rj[ok], den[ok]
            ca = a[jj] - a[ii]
            t = (ca[:, 0] * rj[:, 1] - ca[:, 1] * rj[:, 0]) / den
            u = (ca[:, 0] * ri[:, 1] - ca[:, 1] * ri[:, 0]) / den
            ti, tj = t * L[ii], u * L[jj]
            ok = (ti >= -SNAP) & (ti <= L[ii] + SNAP) & (tj >= -SNAP) & (tj <= L[jj] + SNAP)
            ii, jj, ti, tj = ii[ok], jj[ok], np.clip(ti[ok], 0, L[ii[ok]]), np.clip(tj[ok], 0, L[jj[ok]])
            p = a[ii] + (ti / L[ii])[:, None] * r[ii]
            add(ii, ti, p[:, 0], p[:, 1])
            add(jj, tj, p[:, 0], p[:, 1])

    # segment / arc
    if ns and len(A):
        a, b = S[:, :2], S[:, 2:]
        r = b - a
        L = np.hypot(r[:, 0], r[:, 1])
        u = r / L[:, None]
        for k, (cx, cy, st, ext) in enumerate(A):
            f = np.array([cx, cy]) - a
            s0 = f[:, 0] * u[:, 0] + f[:, 1] * u[:, 1]
            h = f[:, 0] * u[:, 1] - f[:, 1] * u[:, 0]
            near = np.abs(h) <= 1.0 + SNAP
            if not near.any():
                continue
            idx = np.flatnonzero(near)
            hh = h[idx]
            tang = np.abs(np.abs(hh) - 1.0) <= SNAP
            w = np.where(tang, 0.0, np.sqrt(np.clip(1.0 - hh * hh, 0.0, None)))
            for sgn in (-1.0, 1.0):
                if sgn > 0:
                    keep = ~tang
                    ii, ww = idx[keep], w[keep]
                else:
                    ii, ww = idx, w
                s = s0[ii] + sgn * ww
                okp = (s >= -SNAP) & (s <= L[ii] + SNAP)
                ii, s = ii[okp], np.clip(s[okp], 0, L[ii[okp]])
                p = a[ii] + s[:, None] * u[ii]
                ang = np.arctan2(p[:, 1] - cy, p[:, 0] - cx)
                off = _arc_offset(ang, st, ext)
                okc = ~np.isnan(off)
                ii, s, p, off = ii[okc], s[okc], p[okc], off[okc]
                add(ii, s, p[:, 0], p[:, 1])
                add(np.full(len(ii), ns + k), off, p[:, 0], p[:, 1])

    # arc / arc
    na = len(A)
    if na > 1:
        C = A[:, :2]
        for k in range(na - 1):
            J = np.arange(k + 1, na)
            dvec = C[J] - C[k]
            D = np.hypot(dvec[:, 0], dvec[:, 1])
            ok = (D <= 2.0 + SNAP) & (D > SNAP)
            J, dvec, D = J[ok], dvec[ok], D[ok]
            if len(J) == 0:
                continue
            mid = C[k] + dvec / 2.0
            tang = np.abs(D - 2.0) <= SNAP
            kk = np.where(tang, 0.0, np.sqrt(np.clip(1.0 - D * D / 4.0, 0.0, None)) / D)
            perp = np.column_stack((-dvec[:, 1], dvec[:, 0]))
            for sgn in (1.0, -1.0):
                sel = np.ones(len(J), bool) if sgn > 0 else ~tang
                jj = J[sel]
                p = mid[sel] + sgn * kk[sel][:, None] * perp[sel]
                o1 = _arc_offset(np.arctan2(p[:, 1] - C[k, 1], p[:, 0] - C[k, 0]), A[k, 2], A[k, 3])
                o2 = _arc_offset(np.arctan2(p[:, 1] - C[jj, 1], p[:, 0] - C[jj, 0]), A[jj, 2], A[jj, 3])
                good = ~np.isnan(o1) & ~np.isnan(o2)
                add(np.full(good.sum(), ns + k), o1[good], p[good, 0], p[good, 1])
                add(ns + jj[good], o2[good], p[good, 0], p[good, 1])

    if not cid:
        return np.zeros(0, int), np.zeros(0), np.zeros(0), np.zeros(0)
    return np.concatenate(cid), np.concatenate(par), np.concatenate(xs), np.concatenate(ys)


def _curve_point(S, A, ns, c: int, t: np.ndarray):
    t = np.asarray(t, dtype=float)
    if c < ns:
        a, b = S[c, :2], S[c, 2:]
        u = (b - a) / np.hypot(*(b - a))
        return a + t[..., None] * u, np.broadcast_to(u, t.shape + (2,))
    cx, cy, st, _ = A[c - ns]
    ang = st + t
    p = np.stack((cx + np.cos(ang), cy + np.sin(ang)), axis=-1)
    tan = np.stack((-np.sin(ang), np.cos(ang)), axis=-1)
    return p, tan


def build_region(curves: Iterable[Element], predicate: Callable[[np.ndarray], np.ndarray]) -> ArcGon:
    """Boundary of the point set described by ``predicate``.

    ``curves`` must include every curve on which the predicate can change
    value; extra curves are harmless.
    """
    S, A = _canonical_curves(curves)
    ns, na = len(S), len(A)
    cid, par, xs, ys = _intersections(S, A)
    # curve endpoints are vertices too
    ends_c, ends_t, ends_x, ends_y = [], [], [], []
    for i in range(ns):
        L = float(np.hypot(*(S[i, 2:] - S[i, :2])))
        ends_c += [i, i]
        ends_t += [0.0, L]
        ends_x += [S[i, 0], S[i, 2]]
        ends_y += [S[i, 1], S[i, 3]]
    for k in range(na):
        cx, cy, st, ext = A[k]
        full = ext >= TWO_PI - 1e-12
        ts = [0.0] if full else [0.0, ext]
        for t in ts:
            ends_c.append(ns + k)
            ends_t.append(t)
            ends_x.append(cx + math.cos(st + t))
            ends_y.append(cy + math.sin(st + t))
    cid = np.concatenate((cid, np.array(ends_c, int)))
    par = np.concatenate((par, np.array(ends_t, float)))
    xs = np.concatenate((xs, np.array(ends_x, float)))
    ys = np.concatenate((ys, np.array(ends_y, float)))
    if len(cid) == 0:
        return ArcGon()
    pts = np.column_stack((xs, ys))
    vid = _groups(pts, MERGE)
    nv = int(vid.max()) + 1
    rep = np.zeros((nv, 2))
    rep[vid[::-1]] = pts[::-1]  # first occurrence wins

    # pieces: (curve, t0, t1, v0, v1)
    pieces = []
    order = np.lexsort((par, cid))
    cid, par, vid = cid[order], par[order], vid[order]
    bounds = np.flatnonzero(np.diff(cid)) + 1
    for grp in np.split(np.arange(len(cid)), bounds):
        c = int(cid[grp[0]])
        ts, vs = par[grp], vid[grp]
        closed = c >= ns and A[c - ns, 3] >= TWO_PI - 1e-12
        if closed:
            ts = np.append(ts, ts[0] + TWO_PI)
            vs = np.append(vs, vs[0])
        k = 0
        while k < len(ts) - 1:
            j = k + 1
            while j < len(ts) - 1 and vs[j] == vs[k]:
                j += 1
            if vs[j] != vs[k] or (closed and j == len(ts) - 1 and ts[j] - ts[k] > 1e-6):
                pieces.append((c, ts[k], ts[j], int(vs[k]), int(vs[j])))
            k = j
    if not pieces:
        return ArcGon()
    pc = np.array([p[0] for p in pieces])
    t0 = np.array([p[1] for p in pieces])
    t1 = np.array([p[2] for p in pieces])
    # probe both sides of every piece at its midpoint
    mids = np.zeros((len(pieces), 2))
    tans = np.zeros((len(pieces), 2))
    for c in np.unique(pc):
        sel = pc == c
        p, tan = _curve_point(S, A, ns, int(c), 0.5 * (t0[sel] + t1[sel]))
        mids[sel] = p
        tans[sel] = tan
    nrm = np.column_stack((-tans[:, 1], tans[:, 0]))
    # probe closer than any other curve, so thin slivers are classified too
    eps = np.clip(0.25 * _clearance(mids, pc, S, A), 1e-11, PROBE)[:, None]
    probe = np.vstack((mids + eps * nrm, mids - eps * nrm))
    inside = np.asarray(predicate(probe), dtype=bool)
    left, right = inside[: len(pieces)], inside[len(pieces):]
    keep = np.flatnonzero(left != right)
    edges = []
    for e in keep:
        c, a, b, va, vb = pieces[e]
        edges.append((int(c), a, b, va, vb, bool(left[e])))
    return _assemble(edges, S, A, ns, rep)


def _clearance(pts: np.ndarray, own: np.ndarray, S: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest curve other than its own;
    full circles stand in for arcs, which only lowers the value."""
    ns = len(S)
    out = np.full(len(pts), np.inf)
    for i0 in range(0, len(pts), 512):
        P = pts[i0 : i0 + 512]
        o = own[i0 : i0 + 512]
        if ns:
            a, b = S[:, :2], S[:, 2:]
            ab = b - a
            L2 = np.einsum("ij,ij->i", ab, ab)
            rel = P[:, None, :] - a[None]
            t = np.clip(np.einsum("mij,ij->mi", rel, ab) / L2, 0.0, 1.0)
            q = rel - t[..., None] * ab[None]
            d = np.hypot(q[..., 0], q[..., 1])
            d[np.arange(len(P)), np.where(o < ns, o, 0)] = np.where(o < ns, np.inf, d[np.arange(len(P)), 0])
            out[i0 : i0 + 512] = d.min(axis=1)
        if len(A):
            d = np.abs(np.hypot(P[:, None, 0] - A[None, :, 0], P[:, None, 1] - A[None, :, 1]) - 1.0)
            k = o - ns
            sel = k >= 0
            d[np.flatnonzero(sel), k[sel]] = np.inf
            out[i0 : i0 + 512] = np.minimum(out[i0 : i0 + 512], d.min(axis=1))
    return out


def _edge_element(edge, S, A, ns, rep) -> Element:
    c, a, b, va, vb, fwd = edge
    if c < ns:
        p, q = rep[va], rep[vb]
        return SegmentElement(p, q) if fwd else SegmentElement(q, p)
    cx, cy = A[c - ns, :2]
    a0 = math.atan2(rep[va, 1] - cy, rep[va, 0] - cx)
    a1 = math.atan2(rep[vb, 1] - cy, rep[vb, 0] - cx)
    if va == vb:
        st = A[c - ns, 2] + a
        return ArcElement((cx, cy), st, st, fwd)
    return ArcElement((cx, cy), a0, a1, True) if fwd else ArcElement((cx, cy), a1, a0, False)


def _chord_dir(el: Element, at_start: bool) -> float:
    """Angle of a short chord leaving the element's start (or entering its
    end, reversed), so tangent ties are broken by curvature."""
    L = el.length
    d = min(1e-3, L / 3.0)
    f = d / L
    if at_start:
        p, q = el.point_at(0.0), el.point_at(f)
    else:
        p, q = el.point_at(1.0), el.point_at(1.0 - f)
    return math.atan2(q.y - p.y, q.x - p.x)


def _assemble(edges, S, A, ns, rep) -> ArcGon:
    els = [_edge_element(e, S, A, ns, rep) for e in edges]
    starts = {}
    ends = []
    for k, e in enumerate(edges):
        va, vb, fwd = e[3], e[4], e[5]
        s, t = (va, vb) if fwd else (vb, va)
        starts.setdefault(s, []).append(k)
        ends.append(t)
    used = [False] * len(els)
    cycles = []
    for k0 in range(len(els)):
        if used[k0]:
            continue
        cyc = []
        k = k0
        while True:
            used[k] = True
            cyc.append(els[k])
            v = ends[k]
            cands = [j for j in starts.get(v, []) if not used[j] or j == k0]
            if not cands:
                break
            if len(cands) == 1:
                nxt = cands[0]
            else:
                back = _chord_dir(els[k], at_start=False)
                # first outgoing edge clockwise from the reversed incoming one
                nxt = min(cands, key=lambda j: ccw_delta(_chord_dir(els[j], True), back) or TWO_PI)
            if nxt == k0:
                break
            k = nxt
        cycles.append(_merge_cycle(cyc))
    return ArcGon(cycles)


def _same_circle(a: ArcElement, b: ArcElement) -> bool:
    return a.ccw == b.ccw and a.center.dist(b.center) <= MERGE


def _collinear(a: SegmentElement, b: SegmentElement) -> bool:
    u, v = a.tangent_at(), b.tangent_at()
    return abs(u.ux * v.uy - u.uy * v.ux) <= 1e-12 and u.ux * v.ux + u.uy * v.uy > 0


def _join(a: Element, b: Element) -> Element | None:
    if isinstance(a, ArcElement) and isinstance(b, ArcElement) and _same_circle(a, b):
        ext = a.extent + b.extent
        if ext >= TWO_PI - 1e-9:
            return ArcElement(a.center, a.from_angle, a.from_angle, a.ccw)
        return ArcElement(a.center, a.from_angle, b.to_angle, a.ccw)
    if isinstance(a, SegmentElement) and isinstance(b, SegmentElement) and _collinear(a, b):
        return SegmentElement(a.a, b.b)
    return None


def _merge_cycle(cyc: list[Element]) -> list[Element]:
    out: list[Element] = []
    for e in cyc:
        if out:
            j = _join(out[-1], e)
            if j is not None:
                out[-1] = j
                continue
        out.append(e)
    while len(out) > 1:
        j = _join(out[-1], out[0])
        if j is None:
            break
        out[0] = j
        out.pop()
    return out


def union(parts: Sequence[ArcGon]) -> ArcGon:
    """Point-set union of arc-polygons."""
    parts = [p for p in parts if not p.is_empty]
    if not parts:
        return ArcGon()
    curves = [e for p in parts for e in p.elements()]

    def pred(x):
        m = np.zeros(len(x), dtype=bool)
        for p in parts:
            m |= p.contains_mask(x)
        return m

    return build_region(curves, pred)


def intersection(parts: Sequence[ArcGon]) -> ArcGon:
    if not parts or any(p.is_empty for p in parts):
        return ArcGon()
    curves = [e for p in parts for e in p.elements()]

    def pred(x):
        m = np.ones(len(x), dtype=bool)
        for p in parts:
            m &= p.contains_mask(x)
        return m

    return build_region(curves, pred)
