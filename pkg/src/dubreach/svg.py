"""Deterministic SVG rendering of polygons, regions, disks and paths."""
from __future__ import annotations

import math

import numpy as np

from .geometry import ArcElement, Configuration, SegmentElement
from .polygon import ConvexPolygon
from .region import ArcGon
from .witness import CurvaturePath


def _f(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _arc_cmds(e: ArcElement) -> list[str]:
    # full circles are drawn as two half arcs
    pieces = [e] if e.extent < math.pi * 1.999 else [
        ArcElement(e.center, e.from_angle, e.angle_at(0.5), e.ccw),
        ArcElement(e.center, e.angle_at(0.5), e.to_angle if e.extent < 2 * math.pi else e.from_angle, e.ccw),
    ]
    out = []
    for a in pieces:
        end = a.end
        large = 1 if a.extent > math.pi else 0
        sweep = 1 if a.ccw else 0
        out.append(f"A 1 1 0 {large} {sweep} {_f(end.x)} {_f(end.y)}")
    return out


def cycle_path(cycle) -> str:
    start = cycle[0].start
    cmds = [f"M {_f(start.x)} {_f(start.y)}"]
    for e in cycle:
        if isinstance(e, SegmentElement):
            cmds.append(f"L {_f(e.b.x)} {_f(e.b.y)}")
        else:
            cmds += _arc_cmds(e)
    cmds.append("Z")
    return " ".join(cmds)


def _signed_area(cycle) -> float:
    return ArcGon([cycle]).area()


def _path_d(path: CurvaturePath) -> str:
    x, y, th = path.start.point.x, path.start.point.y, path.start.heading
    cmds = [f"M {_f(x)} {_f(y)}"]
    for p in path.primitives:
        nx, ny, nth = p.advance(x, y, th)
        if p.value <= 1e-12:
            pass
        elif p.kind == "S":
            cmds.append(f"L {_f(nx)} {_f(ny)}")
        else:
            # split long turns so every arc command spans less than a full circle
            k = max(1, int(math.ceil(p.value / (math.pi * 0.99))))
            for i in range(1, k + 1):
                ix, iy, _ = p.advance(x, y, th, i / k)
                large = 1 if p.value / k > math.pi else 0
                cmds.append(f"A 1 1 0 {large} {1 if p.kind == 'L' else 0} {_f(ix)} {_f(iy)}")
        x, y, th = nx, ny, nth
    return " ".join(cmds)


def render_svg(
    P: ConvexPolygon,
    region: ArcGon | None = None,
    core: ArcGon | None = None,
    disks=(),
    start: Configuration | None = None,
    witness: CurvaturePath | None = None,
    query=None,
    size: int = 600,
) -> str:
    """SVG document; y points up in the drawing coordinates."""
    xmin, ymin, xmax, ymax = P.bbox
    pad = 0.05 * max(xmax - xmin, ymax - ymin) + 0.1
    w, h = xmax - xmin + 2 * pad, ymax - ymin + 2 * pad
    sc = size / max(w, h)
    stroke = 1.5 / sc
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(w * sc)}" height="{_f(h * sc)}" '
        f'viewBox="{_f(xmin - pad)} {_f(-(ymax + pad))} {_f(w)} {_f(h)}">',
        '<g transform="scale(1,-1)">',
    ]
    if region is not None:
        for cyc in region.cycles:
            fill = "#9ecae1" if _signed_area(cyc) > 0 else "#ffffff"
            lines.append(f'<path class="reach-cycle" d="{cycle_path(cyc)}" fill="{fill}" stroke="#3182bd" stroke-width="{_f(stroke)}"/>')
    if core is not None:
        for cyc in core.cycles:
            lines.append(f'<path class="core" d="{cycle_path(cyc)}" fill="#fdae6b" fill-opacity="0.6" stroke="none"/>')
    for d in disks:
        c = d.center
        lines.append(
            f'<circle class="disk" cx="{_f(c.x)}" cy="{_f(c.y)}" r="1" fill="none" stroke="#636363" '
            f'stroke-width="{_f(stroke)}" stroke-dasharray="{_f(4 * stroke)} {_f(3 * stroke)}"/>'
        )
    pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in P.vertices)
    lines.append(f'<polygon class="polygon" points="{pts}" fill="none" stroke="#000000" stroke-width="{_f(2 * stroke)}"/>')
    if witness is not None:
        lines.append(f'<path class="witness" d="{_path_d(witness)}" fill="none" stroke="#d62728" stroke-width="{_f(2 * stroke)}"/>')
    if query is not None:
        lines.append(f'<circle class="query" cx="{_f(query[0])}" cy="{_f(query[1])}" r="{_f(4 * stroke)}" fill="#d62728"/>')
    if start is not None:
        p, u = np.asarray(start.point), np.asarray(start.dir)
        L = 0.08 * max(w, h)
        tip = p + L * u
        side = np.array([-u[1], u[0]])
        a = tip - 0.3 * L * u + 0.15 * L * side
        b = tip - 0.3 * L * u - 0.15 * L * side
        lines.append(f'<line class="start" x1="{_f(p[0])}" y1="{_f(p[1])}" x2="{_f(tip[0])}" y2="{_f(tip[1])}" stroke="#31a354" stroke-width="{_f(2 * stroke)}"/>')
        lines.append(f'<polygon class="start-head" points="{_f(tip[0])},{_f(tip[1])} {_f(a[0])},{_f(a[1])} {_f(b[0])},{_f(b[1])}" fill="#31a354"/>')
    lines += ["</g>", "</svg>"]
    return "\n".join(lines) + "\n"
