import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dubreach import compute_filling, compute_pockets, contains, core_intersection, validate

from support import RECT, SQ3, SQ4, SQ10, grid_disk_intersection_area, random_polygon, regular

# intersection of the four unit disks at the corners of [1,2]^2, by grid counting at h = 1e-3
SQ3_CORE_GRID_AREA = 0.315164


def hull_set(fil):
    return {tuple(np.round(c, 9) + 0.0) for c in fil.center_hull}


@pytest.mark.parametrize(
    "verts, corners",
    [
        (SQ10, {(1, 1), (9, 1), (9, 9), (1, 9)}),
        (SQ3, {(1, 1), (2, 1), (2, 2), (1, 2)}),
    ],
)
def test_square_filling(verts, corners):
    fil = compute_filling(validate(verts))
    assert fil.kind == "polygon"
    assert hull_set(fil) == corners
    assert {tuple(np.round(d.center, 9) + 0.0) for d in fil.extreme_disks} == corners


def test_thin_rectangle_has_empty_filling():
    fil = compute_filling(validate(RECT))
    assert fil.is_empty
    assert fil.extreme_disks == []


def test_degenerate_fillings():
    assert compute_filling(validate([(0, 0), (6, 0), (6, 2), (0, 2)])).kind == "segment"
    hexagon = validate(regular(6, 1 / math.cos(math.pi / 6)))
    fil = compute_filling(hexagon)
    assert fil.kind == "point"
    assert np.allclose(fil.centers, [[0, 0]], atol=1e-7)


@pytest.mark.parametrize("verts", [SQ10, SQ3])
def test_square_corner_pockets(verts):
    P = validate(verts)
    pockets = compute_pockets(P, compute_filling(P))
    assert len(pockets) == 4
    for pk in pockets:
        assert pk.arc.extent == pytest.approx(math.pi / 2)
        assert sorted(e.length for e in pk.chain) == pytest.approx([1.0, 1.0])


def test_hexagon_pockets():
    P = validate(regular(6, 1 / math.cos(math.pi / 6)))
    pockets = compute_pockets(P, compute_filling(P))
    assert len(pockets) == 6
    for pk in pockets:
        assert 0 < pk.mouth_angle < math.pi


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_pocket_mouths_lie_on_their_disk(seed):
    rng = np.random.default_rng(seed)
    P = random_polygon(rng, int(rng.integers(3, 14)), float(rng.uniform(1.5, 4.0)))
    fil = compute_filling(P)
    if fil.is_empty:
        return
    for pk in compute_pockets(P, fil):
        for m in pk.mouth_points:
            assert abs(pk.bounding_disk.center.dist(m) - 1.0) <= 1e-9
        assert 0 < pk.mouth_angle < math.pi
        # a point of the pocket region sits outside the filling
        assert pk.region().area() > 0


def test_core_square():
    core = core_intersection(compute_filling(validate(SQ3)))
    assert not core.is_empty
    assert core.interior_mask([(1.5, 1.5)])[0]
    assert core.region.n_segments == 0
    assert core.region.area() == pytest.approx(SQ3_CORE_GRID_AREA, rel=1e-3)
    assert core.region.area() == pytest.approx(math.pi / 3 + 1 - math.sqrt(3), abs=1e-9)


def test_core_grid_reference_value():
    assert grid_disk_intersection_area([(1, 1), (2, 1), (2, 2), (1, 2)]) == pytest.approx(SQ3_CORE_GRID_AREA, abs=1e-6)


def test_core_empty_when_extremes_far_apart():
    assert core_intersection(compute_filling(validate(SQ4))).is_empty


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_core_equals_intersection_over_whole_center_set(seed):
    rng = np.random.default_rng(seed)
    P = random_polygon(rng, int(rng.integers(3, 12)), float(rng.uniform(1.3, 2.2)))
    fil = compute_filling(P)
    if fil.is_empty:
        return
    core = core_intersection(fil)
    pts = rng.uniform(fil.centers.min(0) - 1, fil.centers.max(0) + 1, size=(10_000, 2))
    inside = core.interior_mask(pts) if not core.is_empty else np.zeros(len(pts), bool)
    # more centres drawn from inside the hull never cut the core further
    w = rng.dirichlet(np.ones(len(fil.centers)), size=50)
    extra = w @ fil.centers
    allc = np.vstack((fil.centers, extra))
    d = np.hypot(pts[:, None, 0] - allc[None, :, 0], pts[:, None, 1] - allc[None, :, 1])
    brute = np.all(d < 1.0, axis=1)
    far = np.abs(np.min(1.0 - d, axis=1)) > 1e-9
    assert np.array_equal(inside[far], brute[far])
    if not core.is_empty:
        region_in = core.region.contains_mask(pts)
        near = core.region.distance_to_boundary(pts) < 1e-9
        assert np.array_equal(region_in[~near], inside[~near])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_filling_region_inside_polygon(seed):
    rng = np.random.default_rng(seed)
    P = random_polygon(rng, int(rng.integers(3, 14)), float(rng.uniform(1.5, 4.0)))
    fil = compute_filling(P)
    if fil.is_empty:
        return
    for d in fil.extreme_disks:
        assert fil.contains_center(d.center)
    xmin, ymin, xmax, ymax = P.bbox
    pts = rng.uniform((xmin, ymin), (xmax, ymax), size=(10_000, 2))
    pts = pts[fil.fil_region.contains_mask(pts)]
    assert all(contains(P, p) != "outside" for p in pts[:2000])
    assert P.contains_mask(pts, 1e-9).all()
