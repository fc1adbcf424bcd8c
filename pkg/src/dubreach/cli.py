"""Command line interface: ``dubreach reach|query|verify|svg INSTANCE ...``.

Instance files are JSON::

    {"polygon": [[0, 0], [3, 0], [3, 3], [0, 3]],
     "start": {"point": [1.5, 0.0], "heading_radians": 0.0},
     "tolerance": {"tol_len": 1e-9, "tol_angle": 1e-9, "tol_band": 1e-6}}

The turning radius is 1.  ``--scale R`` divides every input coordinate by
``R`` so that instances with turning radius ``R`` can be posed; all output
is then in units of the turning radius.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .canonical import ReachResult, reach
from .errors import NoWitnessFound, ReachError, TargetOutsidePolygon
from .filling import core_intersection
from .geometry import Configuration, TolerancePolicy, UnitDisk
from .oracle import GridSpec, oracle_reach
from .polygon import ConvexPolygon, contains, validate
from .svg import render_svg
from .witness import validate_path, witness_path

EXIT_OK, EXIT_INPUT, EXIT_WITNESS, EXIT_THRESHOLD = 0, 2, 3, 4
COMPLEXITY_NOTE = (
    "candidate configurations are found by per-edge closed-form solves; "
    "worst case O(n^3) overall instead of O(n^2)"
)


class InputError(ReachError, ValueError):
    pass


@dataclass
class Instance:
    polygon: ConvexPolygon
    start: Configuration
    scale: float


def load_instance(path: str, tol: float | None = None, band: float | None = None, scale: float = 1.0) -> Instance:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read instance {path}: {exc}") from exc
    if not isinstance(data, dict) or "polygon" not in data or "start" not in data:
        raise InputError("instance needs 'polygon' and 'start' entries")
    tdata = dict(data.get("tolerance") or {})
    if tol is not None:
        tdata["tol_len"] = tol
        tdata["tol_angle"] = tol
    if band is not None:
        tdata["tol_band"] = band
    try:
        policy = TolerancePolicy(**{k: float(v) for k, v in tdata.items()})
        if not scale > 0:
            raise InputError("--scale must be positive")
        verts = np.asarray(data["polygon"], dtype=float) / scale
        P = validate(verts, policy)
        st = data["start"]
        x, y = (float(v) / scale for v in st["point"])
        s = Configuration.from_pose(x, y, float(st["heading_radians"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed instance: {exc!r}") from exc
    return Instance(P, s, scale)


def region_document(inst: Instance, rr: ReachResult) -> dict:
    reg = rr.region
    return {
        "region": reg.to_dict(),
        "metadata": {
            "vertices": inst.polygon.n,
            "arc_count": reg.n_arcs,
            "segment_count": reg.n_segments,
            "cycle_count": len(reg.cycles),
            "area": reg.area(),
            "bfil_size": rr.bfil_size,
            "canonical_start_count": len(rr.canonical),
            "wall_time_s": rr.elapsed,
            "scale": inst.scale,
            "complexity": COMPLEXITY_NOTE,
        },
    }


def cmd_reach(args) -> int:
    inst = load_instance(args.instance, args.tol, args.band, args.scale)
    rr = reach(inst.polygon, inst.start)
    doc = region_document(inst, rr)
    text = json.dumps(doc, indent=1)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
        m = doc["metadata"]
        print(
            f"arcs {m['arc_count']} segments {m['segment_count']} area {m['area']:.9g} "
            f"bfil {m['bfil_size']} canonical {m['canonical_start_count']} time {m['wall_time_s']:.3f}s"
        )
        print(f"note: {COMPLEXITY_NOTE}")
    else:
        print(text)
    return EXIT_OK


def cmd_query(args) -> int:
    inst = load_instance(args.instance, args.tol, args.band, args.scale)
    P = inst.polygon
    t = (args.x / inst.scale, args.y / inst.scale)
    if contains(P, t) == "outside":
        raise TargetOutsidePolygon(f"target {t} lies outside the polygon")
    rr = reach(P, inst.start)
    label = str(rr.region.contains(t, P.tol.tol_band))
    print(label)
    if args.witness:
        try:
            path = witness_path(P, inst.start, t, rr)
        except NoWitnessFound as exc:
            print(f"error: NoWitnessFound: {exc}", file=sys.stderr)
            return EXIT_WITNESS
        if path is None:
            print("error: no witness, point is not reachable", file=sys.stderr)
            return EXIT_WITNESS
        v = validate_path(P, path, t)
        doc = path.to_dict()
        doc["schema"] = path.schema
        doc["validation"] = {
            "max_curvature_violation": v.max_curvature_violation,
            "max_polygon_violation": v.max_polygon_violation,
            "endpoint_error": v.endpoint_error,
        }
        print(json.dumps(doc, indent=1))
    return EXIT_OK


def agreement(P: ConvexPolygon, rr: ReachResult, grid, n: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    xmin, ymin, xmax, ymax = P.bbox
    pts = np.zeros((0, 2))
    while len(pts) < n:
        cand = rng.uniform((xmin, ymin), (xmax, ymax), size=(2 * n, 2))
        pts = np.vstack((pts, cand[P.contains_mask(cand)]))
    pts = pts[:n]
    band = 2.0 * (grid.spec.dx + P.tol.tol_band)
    lab = grid.classify(pts)
    keep = (lab != "uncertain") & (rr.region.distance_to_boundary(pts) > band)
    analytic = rr.contains_mask(pts[keep])
    oracle = lab[keep] == "reachable"
    agree = float(np.mean(analytic == oracle)) if keep.any() else 1.0
    return {
        "samples": n,
        "compared": int(keep.sum()),
        "agreement": agree,
        "analytic_only": int(np.sum(analytic & ~oracle)),
        "oracle_only": int(np.sum(~analytic & oracle)),
    }


def cmd_verify(args) -> int:
    inst = load_instance(args.instance, args.tol, args.band, args.scale)
    rr = reach(inst.polygon, inst.start)
    spec = GridSpec(dx=args.grid_dx, dtheta=args.grid_dtheta, step=min(args.grid_dx, 0.02))
    grid = oracle_reach(inst.polygon, inst.start, spec)
    rep = agreement(inst.polygon, rr, grid, args.samples, args.seed)
    rep["threshold"] = args.threshold
    print(json.dumps(rep, indent=1))
    return EXIT_OK if rep["agreement"] >= args.threshold else EXIT_THRESHOLD


def cmd_svg(args) -> int:
    inst = load_instance(args.instance, args.tol, args.band, args.scale)
    P = inst.polygon
    rr = reach(P, inst.start)
    core = core_intersection(rr.filling) if not rr.filling.is_empty else None
    disks = []
    for part in rr.parts:
        if hasattr(part, "disk"):
            disks.append(part.disk)
    if core is not None:
        disks += [UnitDisk(c) for c in core.centers]
    query = witness = None
    if args.query is not None:
        query = (args.query[0] / inst.scale, args.query[1] / inst.scale)
        if args.show_witness:
            try:
                witness = witness_path(P, inst.start, query, rr)
            except NoWitnessFound:
                witness = None
    text = render_svg(
        P,
        rr.region,
        core.region if core is not None and not core.is_empty else None,
        disks,
        inst.start,
        witness,
        query,
    )
    with open(args.output, "w") as fh:
        fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="length and angle tolerance")
    common.add_argument("--band", type=float, default=None, help="boundary band width")
    common.add_argument("--scale", type=float, default=1.0, help="turning radius of the input units")

    parser = argparse.ArgumentParser(prog="dubreach", description="Reachable regions of a forward-only unit-curvature vehicle in a convex polygon.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reach", parents=[common], help="compute the reachable region")
    p.add_argument("instance")
    p.add_argument("-o", "--output", default=None, help="region file (JSON); stdout if omitted")
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("query", parents=[common], help="classify one point")
    p.add_argument("instance")
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    p.add_argument("--witness", action="store_true", help="print a witness path")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", parents=[common], help="compare against the grid search")
    p.add_argument("instance")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--grid-dx", type=float, default=0.02)
    p.add_argument("--grid-dtheta", type=float, default=GridSpec().dtheta)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.98)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("svg", parents=[common], help="render an SVG picture")
    p.add_argument("instance")
    p.add_argument("output")
    p.add_argument("--query", type=float, nargs=2, metavar=("X", "Y"), default=None)
    p.add_argument("--show-witness", action="store_true")
    p.set_defaults(func=cmd_svg)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ReachError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
