from fractions import Fraction

import pytest

from plconvex.contraction_space import (
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
from plconvex.errors import FaceNotPresent
from plconvex.exact_geometry import dot, interpolate
from plconvex.realization import cross_polytope, hexagon, subdivide_edge

F = Fraction


def geq(normal):
    return HalfSpaceConstraint(
        normal=tuple(map(F, normal)),
        sense="geq",
        provenance=Provenance(kind="boundary", facet=()),
    )


def eq(normal):
    return HalfSpaceConstraint(
        normal=tuple(map(F, normal)),
        sense="eq",
        provenance=Provenance(kind="on_wall", facet=()),
    )


X_A, X_B = (F(1), F(0)), (F(0), F(1))  # f(t) interpolates <n, x_a> -> <n, x_b>


def test_solve_segment_whole_and_cut():
    assert solve_segment([], X_A, X_B).as_pair() == (F(0), F(1))

    iv = solve_segment([geq((1, 0))], X_A, X_B)  # f: 1 -> 0, nonnegative all along
    assert iv.as_pair() == (F(0), F(1))
    assert not iv.lo_tight and iv.hi_tight  # vanishes exactly at t=1

    iv = solve_segment([geq((1, -1))], X_A, X_B)  # f: 1 -> -1, crosses at 1/2
    assert iv.as_pair() == (F(0), F(1, 2))
    assert iv.hi_tight and not iv.lo_tight

    iv = solve_segment([geq((-1, 3))], X_A, X_B)  # f: -1 -> 3, lower cut at 1/4
    assert iv.as_pair() == (F(1, 4), F(1))
    assert iv.lo_tight and not iv.hi_tight


def test_solve_segment_point_and_empty():
    iv = solve_segment([geq((1, -1)), geq((-1, 1))], X_A, X_B)
    assert iv.as_pair() == (F(1, 2), F(1, 2))
    assert iv.lo_tight and iv.hi_tight

    assert solve_segment([geq((1, -1)), geq((-3, 1))], X_A, X_B).empty
    assert solve_segment([geq((-1, -2))], X_A, X_B).empty  # negative throughout

    # constant-zero constraints never cut and never count as tight
    iv = solve_segment([geq((0, 0))], X_A, X_B)
    assert iv.as_pair() == (F(0), F(1)) and not iv.lo_tight and not iv.hi_tight


def test_solve_segment_eq_sense():
    iv = solve_segment([eq((1, -1))], X_A, X_B)
    assert iv.as_pair() == (F(1, 2), F(1, 2))
    assert solve_segment([eq((1, -1)), eq((1, -3))], X_A, X_B).empty
    assert solve_segment([eq((0, 0))], X_A, X_B).as_pair() == (F(0), F(1))
    assert solve_segment([eq((1, 1))], X_A, X_B).empty  # constant nonzero


def test_constraint_interval_matches_solver():
    c = geq((1, -1))
    assert constraint_interval(c, X_A, X_B).as_pair() == (F(0), F(1, 2))


def test_interval_status_mapping():
    sub = subdivide_edge(cross_polytope(3), (1, 2))
    res = contraction_space(sub, (1, 4))
    assert res.status is SpaceStatus.POINT
    assert res.interval.as_pair() == (F(0), F(0))
    assert res.union_convex
    assert res.contains(0) and not res.contains(F(1, 2))


def test_cross_polytope_edges_are_not_contractible():
    rc = cross_polytope(3)
    for e in sorted(tuple(sorted(x)) for x in rc.complex.edges):
        res = contraction_space(rc, e)
        assert res.status is SpaceStatus.EMPTY
        assert not res.union_convex
        assert res.failure_reason is not None
        assert not res.contains(F(1, 2))


def test_missing_edge_raises():
    with pytest.raises(FaceNotPresent):
        contraction_space(cross_polytope(3), (1, -1))


def test_constraint_provenance_structure():
    # the second subdivision tilts lk(1) so that middle-vertex hyperplanes
    # through the shrunken walls actually span something new
    sub = subdivide_edge(cross_polytope(3), (1, 2))
    sub = subdivide_edge(sub, (-2, 3))
    cons = build_constraints(sub, (1, 3))
    kinds = {c.provenance.kind for c in cons}
    assert kinds == {"boundary", "off_wall", "on_wall"}
    for c in cons:
        assert c.sense in ("geq", "eq")
        if c.provenance.kind == "boundary":
            assert c.provenance.segment_redundant
        if c.provenance.kind == "on_wall":
            assert c.provenance.segment_redundant
            assert c.provenance.middle_vertex is not None
            # the reference vertex sits strictly on the excluded side
            ref = sub.coord(c.provenance.ref_vertex)
            assert c.sense == "geq" and dot(c.normal, ref) < 0
        if c.provenance.kind == "off_wall":
            assert c.provenance.endpoint in ("a", "b")
            assert c.provenance.ref_vertex is not None
            assert c.provenance.opposite_vertex is not None
            # the reference vertex sits strictly on the positive side
            if c.sense == "geq":
                ref = sub.coord(c.provenance.ref_vertex)
                assert dot(c.normal, ref) > 0


def test_off_wall_redundancy_marks():
    # marked constraints come from facets containing both edge endpoints
    sub = subdivide_edge(cross_polytope(3), (1, 2))
    for c in build_constraints(sub, (1, 4)):
        if c.provenance.kind != "off_wall":
            continue
        f = set(c.provenance.facet)
        assert c.provenance.segment_redundant == ({1, 4} <= f)


def test_redundancy_audit_flag():
    sub = subdivide_edge(cross_polytope(3), (1, 2))
    res = contraction_space(sub, (1, 4))
    assert res.redundancy_ok


def test_hexagon_neighbour_edge_subsegment():
    # contracting one hexagon side: admissible points must not push the
    # neighbouring vertices outside their cones; here the space is the
    # whole side
    hx = hexagon()
    res = contraction_space(hx, (1, 2))
    assert res.union_convex
    assert res.status in (
        SpaceStatus.WHOLE_SEGMENT,
        SpaceStatus.SUBSEGMENT,
        SpaceStatus.POINT,
    )
    # whatever the interval, the oracle must agree strictly inside it
    lo, hi = res.interval.t_lo, res.interval.t_hi
    mid = (lo + hi) / 2
    if lo < mid < hi:
        assert oracle_contract_audit(hx, (1, 2), mid)


def test_oracle_agrees_on_fixture_grid():
    cases = [
        (subdivide_edge(cross_polytope(3), (1, 2)), (1, 4)),
        (hexagon(), (1, 2)),
        (hexagon(), (3, 4)),
    ]
    for rc, e in cases:
        res = contraction_space(rc, e)
        lo = res.interval.t_lo
        hi = res.interval.t_hi
        grid = {F(k, 20) for k in range(21)}
        if not res.interval.empty:
            grid |= {lo, hi}
        for t in sorted(grid):
            expected = res.contains(t)
            got = oracle_contract_audit(rc, e, t)
            if got != expected:
                # strictness disagreements may only happen at the interval
                # ends or the segment ends, where contraction degenerates
                assert t in (lo, hi, F(0), F(1))


def test_segment_interval_as_pair():
    assert SegmentInterval(F(0), F(1)).as_pair() == (F(0), F(1))
    assert SegmentInterval(None, None, empty=True).as_pair() is None
