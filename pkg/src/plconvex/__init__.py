"""Exact-rational realizations of simplicial pseudomanifolds.

Wall-crossing convexity, PL moves (subdivision, contraction, suspension),
contraction point spaces, linear systems of parameters, and a JSON document
format — all over `fractions.Fraction`, no floating point anywhere.
"""

from .analysis import (
    ConsecutiveFlatReport,
    ExternalContractionReport,
    MoveDiff,
    StarUnionIntersectionReport,
    SubdivisionEffectReport,
    WallSpanClass,
    WallSpanReport,
    apply_move,
    consecutive_flat_predicate,
    external_contraction_effect,
    facet_images,
    move_diff,
    star_union_intersection_check,
    subdivision_effect_cases,
    wall_span_classes,
)
from .complex_core import (
    Complex,
    Contract,
    Move,
    PseudomanifoldReport,
    Subdivide,
    Suspend,
    WallCrossing,
    contract_edge_abstract,
    four_cycle_cover,
    induced_4cycles,
    induced_5cycles,
    is_flag,
    is_pseudomanifold,
    link,
    link_condition,
    neighbors,
    star,
    subdivide_edge_abstract,
    suspend_abstract,
    wall_crossings,
    walls,
)
from .contraction_space import (
    ConstraintReport,
    ContractionSpaceResult,
    HalfSpaceConstraint,
    Provenance,
    SegmentInterval,
    SpaceStatus,
    build_constraints,
    constraint_interval,
    contraction_space,
    oracle_contract_audit,
    solve_segment,
)
from .errors import (
    DegenerateCrossing,
    DegenerateSpan,
    EmptyComplex,
    FaceNotPresent,
    FacetDegenerate,
    ImproperColoring,
    Inconsistent,
    KernelTooBig,
    NoKernel,
    NotPseudomanifold,
    OmegaExcluded,
    ParseError,
    PlConvexError,
    RankDeficient,
    ReplayMismatch,
    ShapeMismatch,
    Underdetermined,
    ValidationError,
    VertexCollision,
    ZeroWeight,
)
from .exact_geometry import (
    ConvexityClass,
    Separation,
    dot,
    hyperplane_normal,
    interpolate,
    linear_solve,
    nullspace_line,
    perp_basis,
    rank,
    separation,
    span_key,
    vec,
)
from .lsop import (
    ExclusionSet,
    Lsop,
    LsopWallReport,
    ProvenanceExpansion,
    TraceEvent,
    balanced_lsop,
    choose_generic_omega,
    contract_lsop,
    default_seed,
    exclusion_set,
    is_lsop,
    lsop_wall_classification,
    realize_from_lsop,
    standard_cross_polytope_lsop,
    subdivide_lsop,
    suspend_lsop,
    trace_coefficients,
)
from .realization import (
    AuditReport,
    BoundaryWall,
    CrossingReport,
    Realization,
    RealizedComplex,
    StarUnionReport,
    WallRelation,
    audit,
    classify_crossing,
    contract_edge,
    cross_polytope,
    fresh_vertex,
    hexagon,
    point_in_facet_cone,
    subdivide_edge,
    suspend,
    union_of_stars_convex,
    validate_realization,
    wall_relation,
)
from .cli_io import Document, from_realized, parse, serialize

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
