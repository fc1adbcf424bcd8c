"""Brute-force reachability on a discretised (x, y, heading) grid.

The search expands every newly reached cell with three motion primitives of
fixed arclength: full left turn, straight, full right turn.  Each cell keeps
the exact continuous state that first reached it, so positions never drift
toward cell centres.  A primitive is rejected when its endpoint or midpoint
leaves the polygon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.ndimage import binary_dilation

from .errors import StartOutsidePolygon
from .geometry import TWO_PI, Configuration
from .polygon import ConvexPolygon

REACHABLE, UNREACHABLE, UNCERTAIN = "reachable", "unreachable", "uncertain"


@dataclass(frozen=True)
class GridSpec:
    dx: float = 0.02
    dtheta: float = TWO_PI / 360
    step: float = 0.02

    def __post_init__(self):
        if not (self.dx > 0 and self.dtheta > 0 and self.step > 0):
            raise ValueError("grid spacings must be positive")
        if self.step > self.dx + 1e-15:
            raise ValueError("primitive step must not exceed dx")

    @property
    def n_theta(self) -> int:
        return max(1, int(round(TWO_PI / self.dtheta)))


@njit(cache=True)
def _inside(normals, offsets, x, y):
    for k in range(normals.shape[0]):
        if normals[k, 0] * x + normals[k, 1] * y - offsets[k] < -1e-12:
            return False
    return True


@njit(cache=True)
def _bfs(normals, offsets, x0, y0, nx, ny, nth, dx, dth, step, sx, sy, sth):
    occ = np.zeros((nx, ny, nth), dtype=np.uint8)
    cap = 1 << 16
    cur = np.empty((cap, 3))
    cur[0, 0] = sx
    cur[0, 1] = sy
    cur[0, 2] = sth
    ncur = 1
    ix = int((sx - x0) / dx)
    iy = int((sy - y0) / dx)
    it = int((sth % (2 * np.pi)) / dth) % nth
    occ[min(max(ix, 0), nx - 1), min(max(iy, 0), ny - 1), it] = 1
    nxt = np.empty((cap, 3))
    half = 0.5 * step
    while ncur > 0:
        nnext = 0
        for q in range(ncur):
            x = cur[q, 0]
            y = cur[q, 1]
            th = cur[q, 2]
            c = math.cos(th)
            s = math.sin(th)
            for kappa in (1.0, 0.0, -1.0):
                if kappa == 0.0:
                    xm = x + half * c
                    ym = y + half * s
                    xe = x + step * c
                    ye = y + step * s
                    te = th
                else:
                    tm = th + kappa * half
                    te = th + kappa * step
                    xm = x + (math.sin(tm) - s) / kappa
                    ym = y - (math.cos(tm) - c) / kappa
                    xe = x + (math.sin(te) - s) / kappa
                    ye = y - (math.cos(te) - c) / kappa
                if not _inside(normals, offsets, xe, ye) or not _inside(normals, offsets, xm, ym):
                    continue
                te = te % (2 * np.pi)
                i = int((xe - x0) / dx)
                j = int((ye - y0) / dx)
                k = int(te / dth) % nth
                if i < 0 or j < 0 or i >= nx or j >= ny or occ[i, j, k]:
                    continue
                occ[i, j, k] = 1
                if nnext == nxt.shape[0]:
                    grown = np.empty((2 * nnext, 3))
                    grown[:nnext] = nxt
                    nxt = grown
                nxt[nnext, 0] = xe
                nxt[nnext, 1] = ye
                nxt[nnext, 2] = te
                nnext += 1
        cur, nxt = nxt, cur
        ncur = nnext
        if nxt.shape[0] < cur.shape[0]:
            nxt = np.empty_like(cur)
    return occ


@dataclass
class ReachGrid:
    """Occupancy over (x, y, heading) cells; ``mask`` is its projection."""

    spec: GridSpec
    origin: tuple[float, float]
    occupancy: np.ndarray
    polygon: ConvexPolygon | None = None

    def __post_init__(self):
        self.mask = self.occupancy.any(axis=2) if self.occupancy.ndim == 3 else self.occupancy.astype(bool)
        self._dilated = binary_dilation(self.mask, np.ones((3, 3), bool))

    @property
    def shape(self) -> tuple[int, int]:
        return self.mask.shape

    def cell_of(self, points) -> tuple[np.ndarray, np.ndarray]:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        i = np.floor((pts[:, 0] - self.origin[0]) / self.spec.dx).astype(int)
        j = np.floor((pts[:, 1] - self.origin[1]) / self.spec.dx).astype(int)
        return i, j

    def cell_centers(self) -> np.ndarray:
        nx, ny = self.shape
        dx = self.spec.dx
        xs = self.origin[0] + (np.arange(nx) + 0.5) * dx
        ys = self.origin[1] + (np.arange(ny) + 0.5) * dx
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return np.column_stack((X.ravel(), Y.ravel()))

    def occupied_area(self) -> float:
        return float(self.mask.sum()) * self.spec.dx ** 2

    def _lookup(self, grid: np.ndarray, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        nx, ny = grid.shape
        ok = (i >= 0) & (j >= 0) & (i < nx) & (j < ny)
        out = np.zeros(len(i), dtype=bool)
        out[ok] = grid[i[ok], j[ok]]
        return out

    def classify(self, points) -> np.ndarray:
        """Array of ``reachable`` / ``unreachable`` / ``uncertain`` labels."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        i, j = self.cell_of(pts)
        near = self._lookup(self._dilated, i, j)
        # cells clearly inside the polygon but not reached mark the frontier
        free = self._free_cells()
        any_near, any_free = np.zeros(len(pts), bool), np.zeros(len(pts), bool)
        for di in range(-2, 3):
            for dj in range(-2, 3):
                any_near |= self._lookup(self._dilated, i + di, j + dj)
                any_free |= self._lookup(free, i + di, j + dj)
        out = np.where(near, REACHABLE, UNREACHABLE).astype(object)
        out[any_near & any_free] = UNCERTAIN
        return out

    def _free_cells(self) -> np.ndarray:
        if not hasattr(self, "_free"):
            if self.polygon is None:
                inside = np.ones(self.shape, bool)
            else:
                sd = self.polygon.signed_distance(self.cell_centers()).reshape(self.shape)
                inside = sd > self.spec.dx
            self._free = inside & ~self._dilated
        return self._free

    def to_text(self) -> str:
        nx, ny = self.shape
        lines = [
            "# reach grid: rows bottom to top, run lengths alternate starting with empty cells",
            f"width {nx}",
            f"height {ny}",
            f"origin {self.origin[0]!r} {self.origin[1]!r}",
            f"dx {self.spec.dx!r}",
        ]
        for j in range(ny):
            row = self.mask[:, j]
            runs, val, cnt = [], False, 0
            for v in row:
                if bool(v) == val:
                    cnt += 1
                else:
                    runs.append(cnt)
                    val, cnt = bool(v), 1
            runs.append(cnt)
            lines.append(" ".join(map(str, runs)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ReachGrid":
        head = {}
        rows = []
        for line in text.splitlines():
            if not line or line.startswith("#"):
                continue
            key = line.split()[0]
            if key in ("width", "height", "origin", "dx"):
                head[key] = line.split()[1:]
            else:
                rows.append([int(v) for v in line.split()])
        nx, ny = int(head["width"][0]), int(head["height"][0])
        mask = np.zeros((nx, ny), dtype=bool)
        for j, runs in enumerate(rows):
            pos, val = 0, False
            for r in runs:
                mask[pos : pos + r, j] = val
                pos += r
                val = not val
        dx = float(head["dx"][0])
        return cls(GridSpec(dx=dx, step=dx), (float(head["origin"][0]), float(head["origin"][1])), mask)


def oracle_reach(P: ConvexPolygon, s: Configuration, g: GridSpec = GridSpec()) -> ReachGrid:
    if P.signed_distance(s.point)[0] < -P.tol.tol_band:
        raise StartOutsidePolygon(f"start {tuple(s.point)} lies outside the polygon")
    xmin, ymin, xmax, ymax = P.bbox
    nx = int(math.ceil((xmax - xmin) / g.dx)) + 1
    ny = int(math.ceil((ymax - ymin) / g.dx)) + 1
    nth = g.n_theta
    occ = _bfs(
        np.ascontiguousarray(P.normals, dtype=float),
        np.ascontiguousarray(P.offsets, dtype=float),
        float(xmin), float(ymin), nx, ny, nth,
        float(g.dx), TWO_PI / nth, float(g.step),
        float(s.point.x), float(s.point.y), float(s.heading),
    )
    return ReachGrid(g, (float(xmin), float(ymin)), occ.view(bool), P)


def oracle_query(P: ConvexPolygon, s: Configuration, t, g: GridSpec = GridSpec(), grid: ReachGrid | None = None) -> str:
    grid = oracle_reach(P, s, g) if grid is None else grid
    return str(grid.classify([t])[0])
