"""Where along an edge may it be contracted?

For an edge {a,b} of an everywhere-convex realized pseudomanifold the
admissible contraction points form a closed subinterval of the segment
w(t) = (1-t)*x_a + t*x_b.  The interval is cut out by half-space
constraints of three kinds:

* boundary   -- walls on the boundary of St(a) ∪ St(b), oriented inward;
* off_wall   -- hyperplanes through a wall of a star facet with the
                opposite vertex swapped in and a reference vertex removed;
* on_wall    -- hyperplanes through a shrunken wall and a middle vertex,
                oriented away from the reference vertex (the excluded side
                is where the new vertex would turn the crossing concave).

The interval is solved from the boundary and off_wall families; on_wall
constraints are produced as well and checked to be redundant.  Everything
is gated on the star union being convex: if it is not, the space is empty
and the failing (wall, vertex) pair is reported.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .complex_core import link, star
from .errors import (
    DegenerateCrossing,
    FaceNotPresent,
    NotPseudomanifold,
    FacetDegenerate,
    RankDeficient,
)
from .exact_geometry import RatVec, dot, hyperplane_normal, rank, vscale
from .realization import (
    RealizedComplex,
    StarUnionReport,
    audit,
    contract_edge,
    union_of_stars_convex,
)


@dataclass(frozen=True)
class Provenance:
    kind: str  # "boundary" | "off_wall" | "on_wall"
    facet: tuple[int, ...]
    wall: Optional[tuple[int, ...]] = None
    ref_vertex: Optional[int] = None
    opposite_vertex: Optional[int] = None
    middle_vertex: Optional[int] = None
    endpoint: Optional[str] = None  # "a" | "b"
    segment_redundant: bool = False


@dataclass(frozen=True)
class HalfSpaceConstraint:
    """<normal, w(t)> >= 0 (sense "geq") or == 0 (sense "eq")."""

    normal: RatVec
    sense: str
    provenance: Provenance


@dataclass(frozen=True)
class SegmentInterval:
    t_lo: Optional[Fraction]
    t_hi: Optional[Fraction]
    lo_tight: bool = False  # some non-trivial constraint vanishes at t_lo
    hi_tight: bool = False
    empty: bool = False

    def as_pair(self):
        return None if self.empty else (self.t_lo, self.t_hi)


class SpaceStatus(enum.Enum):
    EMPTY = "empty"
    POINT = "point"
    SUBSEGMENT = "subsegment"
    WHOLE_SEGMENT = "whole_segment"


def _endpoint_values(c: HalfSpaceConstraint, x_a: RatVec, x_b: RatVec):
    return dot(c.normal, x_a), dot(c.normal, x_b)


def solve_segment(
    constraints: Iterable[HalfSpaceConstraint], x_a: RatVec, x_b: RatVec
) -> SegmentInterval:
    """Exact intersection of the constraints with the segment, as t in [0,1].

    Each constraint is affine in t: f(t) = (1-t)*<n,x_a> + t*<n,x_b>.
    """
    lo, hi = Fraction(0), Fraction(1)
    cs = list(constraints)
    for c in cs:
        p, q = _endpoint_values(c, x_a, x_b)
        if c.sense == "eq":
            if p == q:
                if p != 0:
                    return SegmentInterval(None, None, empty=True)
                continue
            t = p / (p - q)
            lo, hi = max(lo, t), min(hi, t)
        else:
            if p == q:
                if p < 0:
                    return SegmentInterval(None, None, empty=True)
                continue
            t = p / (p - q)
            if q > p:
                lo = max(lo, t)
            else:
                hi = min(hi, t)
        if lo > hi:
            return SegmentInterval(None, None, empty=True)
    lo_tight = hi_tight = False
    for c in cs:
        p, q = _endpoint_values(c, x_a, x_b)
        if p == q == 0:
            continue
        if p + lo * (q - p) == 0:
            lo_tight = True
        if p + hi * (q - p) == 0:
            hi_tight = True
    return SegmentInterval(lo, hi, lo_tight, hi_tight)


def constraint_interval(
    c: HalfSpaceConstraint, x_a: RatVec, x_b: RatVec
) -> SegmentInterval:
    return solve_segment([c], x_a, x_b)


def _status(interval: SegmentInterval) -> SpaceStatus:
    if interval.empty:
        return SpaceStatus.EMPTY
    if interval.t_lo == interval.t_hi:
        return SpaceStatus.POINT
    if interval.t_lo == 0 and interval.t_hi == 1:
        return SpaceStatus.WHOLE_SEGMENT
    return SpaceStatus.SUBSEGMENT


def _oriented(normal: RatVec, ref: RatVec) -> RatVec:
    s = dot(normal, ref)
    assert s != 0
    return vscale(Fraction(-1), normal) if s < 0 else normal


def build_constraints(
    rc: RealizedComplex, e: Iterable[int]
) -> tuple[HalfSpaceConstraint, ...]:
    """All contraction constraints for the edge, in a deterministic order."""
    a, b = sorted(e)
    c = rc.complex
    if not c.has_face({a, b}):
        raise FaceNotPresent(f"{{{a},{b}}} is not an edge")
    coords = rc.realization.coords
    out: list[HalfSpaceConstraint] = []

    union = union_of_stars_convex(rc, a, b)
    for bw in union.boundary_walls:
        u = next(iter(set(bw.facet) - set(bw.wall)))
        out.append(
            HalfSpaceConstraint(
                normal=bw.normal,
                sense="geq",
                provenance=Provenance(
                    kind="boundary",
                    facet=bw.facet,
                    wall=bw.wall,
                    ref_vertex=u,
                    # under the star-union gate these hold on the whole
                    # segment: both endpoints already satisfy them
                    segment_redundant=True,
                ),
            )
        )

    table: dict[frozenset, list] = {}
    for f in c.facets:
        for v in f:
            table.setdefault(f - {v}, []).append(f)

    for endpoint, p, other in (("a", a, b), ("b", b, a)):
        for f in sorted(star(c, [p]), key=lambda s: tuple(sorted(s))):
            wall = f - {p}
            partners = [g for g in table[wall] if g != f]
            if len(partners) != 1:
                raise NotPseudomanifold(
                    f"wall {sorted(wall)} lies in {1 + len(partners)} facets"
                )
            partner_off = next(iter(partners[0] - wall))
            for r in sorted(f - {p}):
                if r == other:
                    continue
                span_verts = sorted((wall | {partner_off}) - {r})
                n = _oriented(
                    hyperplane_normal([coords[v] for v in span_verts]),
                    coords[r],
                )
                out.append(
                    HalfSpaceConstraint(
                        normal=n,
                        sense="geq",
                        provenance=Provenance(
                            kind="off_wall",
                            facet=tuple(sorted(f)),
                            wall=tuple(sorted(wall)),
                            ref_vertex=r,
                            opposite_vertex=partner_off,
                            endpoint=endpoint,
                            segment_redundant=other in f,
                        ),
                    )
                )

    lk_a = set(link(c, [a]).vertices)
    lk_b = set(link(c, [b]).vertices)
    for endpoint, p, mine, theirs in (("a", a, lk_a, lk_b), ("b", b, lk_b, lk_a)):
        for r in sorted(mine - theirs - {a, b}):
            middles = sorted(mine & set(link(c, [r]).vertices))
            for f in sorted(star(c, [p, r]), key=lambda s: tuple(sorted(s))):
                base = sorted(f - {p, r})
                base_cols = [coords[v] for v in base]
                for m in middles:
                    if m in f:
                        continue
                    if rank(base_cols + [coords[m]]) == len(base):
                        continue  # middle vertex adds nothing to the span
                    n = hyperplane_normal(base_cols + [coords[m]])
                    s = dot(n, coords[r])
                    if s == 0:
                        continue  # hyperplane through r bounds no r-side
                    if s > 0:
                        n = vscale(Fraction(-1), n)
                    out.append(
                        HalfSpaceConstraint(
                            normal=n,
                            sense="geq",
                            provenance=Provenance(
                                kind="on_wall",
                                facet=tuple(sorted(f)),
                                wall=tuple(sorted((f - {p, r}) | {r})),
                                ref_vertex=r,
                                middle_vertex=m,
                                endpoint=endpoint,
                                segment_redundant=True,
                            ),
                        )
                    )
    return tuple(out)


@dataclass(frozen=True)
class ConstraintReport:
    constraint: HalfSpaceConstraint
    interval: SegmentInterval


@dataclass(frozen=True)
class ContractionSpaceResult:
    status: SpaceStatus
    interval: SegmentInterval
    union_convex: bool
    union_report: StarUnionReport
    constraints: tuple[ConstraintReport, ...]
    redundancy_ok: Optional[bool]
    failure_reason: Optional[str] = None

    def contains(self, t) -> bool:
        t = Fraction(t)
        if self.status is SpaceStatus.EMPTY:
            return False
        return self.interval.t_lo <= t <= self.interval.t_hi


def contraction_space(rc: RealizedComplex, e: Iterable[int]) -> ContractionSpaceResult:
    """Solve the admissible contraction interval for the edge `e`."""
    a, b = sorted(e)
    if not rc.complex.has_face((a, b)):
        raise FaceNotPresent(f"edge {(a, b)} not in complex")
    x_a, x_b = rc.coord(a), rc.coord(b)
    union = union_of_stars_convex(rc, a, b)
    constraints = build_constraints(rc, e)
    reports = tuple(
        ConstraintReport(c, constraint_interval(c, x_a, x_b))
        for c in constraints
    )
    defining = [c for c in constraints if c.provenance.kind != "on_wall"]
    interval = solve_segment(defining, x_a, x_b)
    minimal = [c for c in defining if not c.provenance.segment_redundant]
    red_ok = (
        solve_segment(constraints, x_a, x_b).as_pair() == interval.as_pair()
        and solve_segment(minimal, x_a, x_b).as_pair() == interval.as_pair()
    )
    if not union.convex:
        return ContractionSpaceResult(
            status=SpaceStatus.EMPTY,
            interval=SegmentInterval(None, None, empty=True),
            union_convex=False,
            union_report=union,
            constraints=reports,
            redundancy_ok=red_ok,
            failure_reason=f"star union not convex at {union.witness}",
        )
    return ContractionSpaceResult(
        status=_status(interval),
        interval=interval,
        union_convex=True,
        union_report=union,
        constraints=reports,
        redundancy_ok=red_ok,
        failure_reason=None,
    )


def oracle_contract_audit(rc: RealizedComplex, e: Iterable[int], t) -> bool:
    """Ground truth: contract at t and audit the result from scratch."""
    try:
        rc2, warnings = contract_edge(rc, e, t=Fraction(t))
    except FacetDegenerate:
        return False
    if any(kind == "not_pseudomanifold" for kind, _ in warnings):
        return False
    w = rc2.move_log[-1].w
    try:
        rep = audit(rc2, stop_on_nonconvex=True, focus=w)
    except (DegenerateCrossing, RankDeficient, NotPseudomanifold):
        return False
    return rep.all_crossings_convex
