from fractions import Fraction

import pytest

from plconvex.complex_core import Complex
from plconvex.errors import (
    ImproperColoring,
    Inconsistent,
    OmegaExcluded,
    ReplayMismatch,
    ShapeMismatch,
    Underdetermined,
    VertexCollision,
    ZeroWeight,
)
from plconvex.exact_geometry import ConvexityClass, rank
from plconvex.lsop import (
    Lsop,
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
from plconvex.realization import (
    contract_edge,
    cross_polytope,
    subdivide_edge,
    suspend,
)

F = Fraction


def test_standard_lsop_shape():
    l = standard_cross_polytope_lsop(3)
    assert l.nrows == 3
    assert l.vertices == (-3, -2, -1, 1, 2, 3)
    assert l.column(2) == l.column(-2) == (F(0), F(1), F(0))
    ok, facet = is_lsop(cross_polytope(3).complex, l)
    assert ok and facet is None


def test_is_lsop_reports_first_failing_facet():
    c = cross_polytope(2).complex
    cols = {1: (F(1), F(0)), -1: (F(1), F(0)), 2: (F(1), F(0)), -2: (F(0), F(1))}
    ok, facet = is_lsop(c, Lsop.from_columns(cols))
    assert not ok
    assert facet == (-2, -1) or facet == (-1, 2)  # first in facet order
    assert rank([cols[v] for v in facet]) < 2
    with pytest.raises(ShapeMismatch):
        is_lsop(cross_polytope(3).complex, Lsop.from_columns(cols))


def test_balanced_lsop_from_coloring():
    c = cross_polytope(3).complex
    coloring = {v: abs(v) for v in c.vertices}
    l = balanced_lsop(c, coloring)
    assert is_lsop(c, l)[0]
    assert l.column(1) == l.column(-1)
    with pytest.raises(ImproperColoring):
        balanced_lsop(c, {v: (1 if v > 0 else 2) for v in c.vertices})
    with pytest.raises(ShapeMismatch):
        balanced_lsop(c, {v: abs(v) for v in list(c.vertices)[:-1]})


def test_suspend_lsop():
    l = standard_cross_polytope_lsop(2)
    s = suspend_lsop(l, 3, -3)
    assert s.nrows == 3
    assert s.column(3) == s.column(-3) == (F(0), F(0), F(1))
    assert s.column(1) == (F(1), F(0), F(0))
    with pytest.raises(VertexCollision):
        suspend_lsop(l, 2, 5)


def test_subdivide_lsop_combines_columns():
    l = standard_cross_polytope_lsop(3)
    s = subdivide_lsop(l, 1, 2, 4)
    assert s.column(4) == (F(-1, 2), F(-1, 2), F(0))
    s2 = subdivide_lsop(l, 1, 2, 4, alpha=F(-1, 3), beta=F(-2, 3))
    assert s2.column(4) == (F(-1, 3), F(-2, 3), F(0))
    with pytest.raises(ZeroWeight):
        subdivide_lsop(l, 1, 2, 4, alpha=0)
    with pytest.raises(VertexCollision):
        subdivide_lsop(l, 1, 2, 3)


def contractible_fixture():
    """Octahedron with {1,2} subdivided; the edge {1,v} passes the link
    condition and its LSOP contraction is generically fine."""
    rc = subdivide_edge(cross_polytope(3), (1, 2))
    l = subdivide_lsop(standard_cross_polytope_lsop(3), 1, 2, 4)
    return rc, l


def test_contract_lsop_and_exclusions():
    rc, l = contractible_fixture()
    excl = exclusion_set(l, rc.complex, 1, 4)
    assert not excl.always_bad
    omegas = set(excl.omegas())

    good = choose_generic_omega(l, rc.complex, 1, 4)
    assert good not in omegas
    assert 0 < good <= 1

    l2 = contract_lsop(l, rc.complex, 1, 4, 5, good)
    c2, _ = rc.complex, None
    contracted, _ = contract_edge(rc, (1, 4), t=F(0))
    ok, _ = is_lsop(contracted.complex, l2)
    assert ok

    # forcing an excluded weight must break the predicted facets
    for om in sorted(omegas):
        forced = contract_lsop(l, rc.complex, 1, 4, 5, om, check=False)
        ok, _ = is_lsop(contracted.complex, forced)
        assert not ok
        for g in excl.facets_for(om):
            cols = [forced.column(v) for v in sorted(set(g) | {5})]
            assert rank(cols) < len(cols)
        with pytest.raises(OmegaExcluded):
            contract_lsop(l, rc.complex, 1, 4, 5, om)

    # weight 0 collapses w onto a's column and is refused even unchecked
    with pytest.raises(OmegaExcluded):
        contract_lsop(l, rc.complex, 1, 4, 5, 0, check=False)


def test_choose_generic_omega_prefers_target():
    rc, l = contractible_fixture()
    om = choose_generic_omega(l, rc.complex, 1, 4, target=F(1, 2))
    excl = set(exclusion_set(l, rc.complex, 1, 4).omegas())
    if F(1, 2) not in excl:
        assert om == F(1, 2)
    assert om not in excl


def test_realize_from_lsop_roundtrip():
    rc = cross_polytope(3)
    l = standard_cross_polytope_lsop(3)
    seed = {v: rc.coord(v) for v in (1, 2, 3)}
    real = realize_from_lsop(l, rc.complex, seed)
    assert real.coords == rc.realization.coords

    with pytest.raises(Underdetermined):
        realize_from_lsop(l, rc.complex, {1: rc.coord(1)})

    # an inconsistent over-seed: x_{-1} must equal -x_1 under theta_1
    bad = dict(seed)
    bad[-1] = rc.coord(1)
    with pytest.raises(Inconsistent):
        realize_from_lsop(l, rc.complex, bad)


def test_default_seed_complements_first_facet():
    rc = cross_polytope(3)
    seed = default_seed(rc)
    assert sorted(seed) == [1, 2, 3]  # complement of facet (-3,-2,-1)
    sub = subdivide_edge(rc, (1, 2))
    assert sorted(default_seed(sub)) == [1, 2, 3, 4]


def test_lsop_wall_classification_matches_direct_audit():
    rc, l = contractible_fixture()
    rep = lsop_wall_classification(rc.complex, l, (1, 3), default_seed(rc))
    coeffs = rep.relation.coeffs
    assert coeffs[-2] == 1
    assert coeffs[4] == F(3, 2)
    assert coeffs[1] == -1
    assert coeffs[3] == 0
    assert rep.classes[1] is ConvexityClass.STRICTLY_CONVEX
    assert rep.classes[3] is ConvexityClass.FLAT


def test_trace_reproduces_columns_and_weights():
    rc = subdivide_edge(cross_polytope(3), (1, 2))
    rc = suspend(rc)
    before = rc.complex  # complex at the moment of contraction
    rc, _ = contract_edge(rc, (2, 4), t=F(1, 2), omega=F(1, 2))
    base = standard_cross_polytope_lsop(3)

    l = subdivide_lsop(base, 1, 2, 4)
    l = suspend_lsop(l, 5, -5)
    l = contract_lsop(l, before, 2, 4, 6, F(1, 2))

    trace = trace_coefficients(rc.move_log, base)
    for v in rc.complex.vertices:
        assert trace.columns[v] == l.column(v)
        assert trace.reassemble(v) == trace.columns[v]
        for _, weight in trace.entries[v]:
            assert weight != 0
            m = abs(weight)
            assert m.numerator == 1 and (m.denominator & (m.denominator - 1)) == 0

    # a base missing a vertex the log touches cannot be replayed
    with pytest.raises(ReplayMismatch):
        trace_coefficients(rc.move_log, standard_cross_polytope_lsop(1))
