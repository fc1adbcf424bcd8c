"""Reachable regions of a forward-only vehicle with unit turning radius
moving inside a convex polygon."""
from .boundary_reach import (
    Bfil,
    BoundaryReach,
    CandidateConfiguration,
    LdaRegion,
    blocking_config,
    boundary_reach,
    bfil,
    candidate_configurations,
    lda,
    reach_from_boundary,
)
from .canonical import CanonicalStart, DaRegion, ReachResult, canonical_starts, direct_access, reach
from .errors import *  # noqa: F401,F403
from .filling import Core, Filling, Pocket, compute_filling, compute_pockets, core_intersection
from .geometry import (
    DEFAULT_TOL,
    ArcElement,
    Configuration,
    Direction,
    Point,
    SegmentElement,
    TolerancePolicy,
    UnitDisk,
    left_disk,
    right_disk,
)
from .oracle import GridSpec, ReachGrid, oracle_query, oracle_reach
from .polygon import (
    BoundaryConfiguration,
    ConvexPolygon,
    ForwardChain,
    boundary_configuration,
    contains,
    convex_medial_axis,
    forward_chain,
    validate,
)
from .region import ArcGon, MembershipResult, intersection, union
from .witness import CurvaturePath, PathValidation, Primitive, dubins_shortest, validate_path, witness_path

__version__ = "0.1.0"
