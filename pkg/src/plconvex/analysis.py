"""Structural diagnostics: move diffs, flat-crossing bookkeeping, wall-span
classes, and the effect of nearby subdivisions/contractions on contraction
intervals.

Reports never raise on a failed expectation; they carry an `ok`-style field
so that sweeps over a corpus can collect rather than abort.  Hypothesis
guards are machine-checked and failures are reported as not applicable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .complex_core import (
    Complex,
    Contract,
    Move,
    Subdivide,
    Suspend,
    induced_4cycles,
    link,
    star,
    wall_crossings,
)
from .contraction_space import (
    ContractionSpaceResult,
    SpaceStatus,
    contraction_space,
)
from .errors import DegenerateSpan, FaceNotPresent, ValidationError
from .exact_geometry import (
    ConvexityClass,
    dot,
    hyperplane_normal,
    interpolate,
    linear_solve,
    span_key,
)
from .realization import (
    RealizedComplex,
    audit,
    contract_edge,
    subdivide_edge,
    suspend,
    union_of_stars_convex,
    wall_relation,
)


def apply_move(rc: RealizedComplex, move: Move) -> RealizedComplex:
    """Replay a move record; contraction warnings are dropped."""
    if isinstance(move, Suspend):
        return suspend(rc, move.p, move.q, coords=move.coords)
    if isinstance(move, Subdivide):
        return subdivide_edge(
            rc,
            (move.a, move.b),
            v=move.v,
            eta=move.eta if move.eta is not None else Fraction(1, 2),
            coords=move.coords,
            alpha=move.alpha,
            beta=move.beta,
        )
    if isinstance(move, Contract):
        out, _ = contract_edge(
            rc,
            (move.a, move.b),
            w=move.w,
            t=move.t if move.t is not None else Fraction(1, 2),
            coords=move.coords,
            omega=move.omega,
        )
        return out
    raise ValidationError(f"unknown move {move!r}")


def facet_images(move: Move, facet: frozenset) -> tuple[frozenset, ...]:
    """Facets of the moved complex descending from `facet`."""
    f = frozenset(facet)
    if isinstance(move, Suspend):
        return (f | {move.p}, f | {move.q})
    if isinstance(move, Subdivide):
        if move.a in f and move.b in f:
            return ((f - {move.a}) | {move.v}, (f - {move.b}) | {move.v})
        return (f,)
    if isinstance(move, Contract):
        if move.a in f and move.b in f:
            return ()
        if move.a in f or move.b in f:
            return ((f - {move.a, move.b}) | {move.w},)
        return (f,)
    raise ValidationError(f"unknown move {move!r}")


def _vertex_substitution(move: Move) -> dict[int, int]:
    if isinstance(move, Contract):
        return {move.a: move.w, move.b: move.w}
    return {}


def _subst_cycle(cycle, mapping):
    """Rename a canonical 4-cycle; None when two of its vertices merge."""
    vs = [mapping.get(v, v) for v in cycle]
    if len(set(vs)) != 4:
        return None
    p0 = min(vs)
    i = vs.index(p0)
    p1 = vs[(i + 2) % 4]
    q0, q1 = sorted((vs[(i + 1) % 4], vs[(i + 3) % 4]))
    return (p0, q0, p1, q1)


def _crossing_pairs(move, facet_f, facet_g):
    """Images of a crossing as unordered facet pairs sharing a wall."""
    out = []
    for f2 in facet_images(move, facet_f):
        for g2 in facet_images(move, facet_g):
            if f2 != g2 and len(f2 & g2) == len(f2) - 1:
                out.append(frozenset((f2, g2)))
    return out


@dataclass(frozen=True)
class MoveDiff:
    move: Move
    new_4cycles: tuple
    lost_4cycles: tuple
    new_flat_pairs: tuple
    lost_flat_pairs: tuple
    before: RealizedComplex
    after: RealizedComplex
    cspace_before: Optional[ContractionSpaceResult] = None
    cspace_after: Optional[ContractionSpaceResult] = None
    observed_edge_after: Optional[tuple[int, int]] = None


def move_diff(
    rc: RealizedComplex, move: Move, observed_edge: Optional[Iterable[int]] = None
) -> MoveDiff:
    """Apply the move and diff 4-cycles and flat pairs across it.

    Old cycles and crossings are identified with their images under the
    move (pole insertion, subdividing-vertex splitting, or contraction
    substitution); anything without a surviving image counts as lost.
    """
    rc2 = apply_move(rc, move)
    subst = _vertex_substitution(move)

    before_cycles = induced_4cycles(rc.complex)
    after_cycles = set(induced_4cycles(rc2.complex))
    if isinstance(move, Suspend):
        # old cycles persist untouched: poles are adjacent to everything
        mapped = {c: (c,) for c in before_cycles}
    else:
        mapped = {
            c: tuple(x for x in (_subst_cycle(c, subst),) if x is not None)
            for c in before_cycles
        }
    surviving_images = set()
    lost_cycles = []
    for c, imgs in mapped.items():
        live = [x for x in imgs if x in after_cycles]
        surviving_images.update(live)
        if not live:
            lost_cycles.append(c)
    new_cycles = sorted(after_cycles - surviving_images)

    before_audit = audit(rc)
    after_audit = audit(rc2)
    after_flats = {}
    for rep in after_audit.crossings:
        for m, cl in rep.classes.items():
            if cl is ConvexityClass.FLAT:
                pair = frozenset(
                    (frozenset(rep.crossing.facet_f), frozenset(rep.crossing.facet_g))
                )
                after_flats[(pair, m)] = (rep.crossing.wall, m)
    image_keys = set()
    lost_flats = []
    for rep in before_audit.crossings:
        cr = rep.crossing
        pairs = _crossing_pairs(move, frozenset(cr.facet_f), frozenset(cr.facet_g))
        for m, cl in rep.classes.items():
            if cl is not ConvexityClass.FLAT:
                continue
            m2 = subst.get(m, m)
            keys = [(p, m2) for p in pairs]
            image_keys.update(keys)
            if not any(k in after_flats for k in keys):
                lost_flats.append((cr.wall, m))
    new_flats = sorted(
        v for k, v in after_flats.items() if k not in image_keys
    )

    cs_before = cs_after = None
    observed_after = None
    if observed_edge is not None:
        a, b = sorted(observed_edge)
        cs_before = contraction_space(rc, (a, b))
        a2, b2 = subst.get(a, a), subst.get(b, b)
        if a2 != b2 and rc2.complex.has_face({a2, b2}):
            observed_after = tuple(sorted((a2, b2)))
            cs_after = contraction_space(rc2, observed_after)

    return MoveDiff(
        move=move,
        new_4cycles=tuple(new_cycles),
        lost_4cycles=tuple(sorted(lost_cycles)),
        new_flat_pairs=tuple(new_flats),
        lost_flat_pairs=tuple(sorted(lost_flats)),
        before=rc,
        after=rc2,
        cspace_before=cs_before,
        cspace_after=cs_after,
        observed_edge_after=observed_after,
    )


# ---------------------------------------------------------------------------
# consecutive crossings and flatness after contraction

@dataclass(frozen=True)
class ConsecutiveFlatReport:
    applicable: bool
    reason: Optional[str]
    ratio_fg: Optional[Fraction] = None
    ratio_gh: Optional[Fraction] = None
    predicted_flat_at_w: Optional[bool] = None


def consecutive_flat_predicate(
    rc: RealizedComplex, F, G, H, e
) -> ConsecutiveFlatReport:
    """Ratio test on two consecutive crossings through G = (F\\p) ∪ b.

    F contains a but not b, G swaps some p for b, H swaps a for some q.
    With the sign preconditions met, equality of the coefficient ratios
    of a and b across the two relations predicts that contracting {a,b}
    makes the surviving crossing flat at the new vertex.
    """
    a, b = sorted(e)
    F, G, H = frozenset(F), frozenset(G), frozenset(H)
    c = rc.complex
    for x in (F, G, H):
        if x not in c.facets:
            raise FaceNotPresent(f"{sorted(x)} is not a facet")
    if not c.has_face({a, b}):
        raise FaceNotPresent(f"{{{a},{b}}} is not an edge")
    if a not in F or b in F:
        raise ValidationError("first facet must contain a and avoid b")
    if len(F - G) != 1 or G - F != {b}:
        raise ValidationError("second facet must swap one vertex of F for b")
    if G - H != {a} or len(H - G) != 1:
        raise ValidationError("third facet must swap a out of the second")

    crossings = {
        frozenset((frozenset(cr.facet_f), frozenset(cr.facet_g))): cr
        for cr in wall_crossings(c)
    }
    rel_fg = wall_relation(
        rc.realization.coords, crossings[frozenset((F, G))]
    )
    rel_gh = wall_relation(
        rc.realization.coords, crossings[frozenset((G, H))]
    )
    alpha_a, alpha_b = rel_fg.coeffs[a], rel_fg.coeffs[b]
    beta_a, beta_b = rel_gh.coeffs[a], rel_gh.coeffs[b]
    if not (alpha_b > 0 and alpha_a < 0 and beta_a > 0 and beta_b < 0):
        return ConsecutiveFlatReport(
            applicable=False,
            reason=(
                "sign preconditions fail: need strict convexity at a and b "
                f"(got α_a={alpha_a}, α_b={alpha_b}, β_a={beta_a}, β_b={beta_b})"
            ),
        )
    ratio_fg = alpha_a / alpha_b
    ratio_gh = beta_a / beta_b
    return ConsecutiveFlatReport(
        applicable=True,
        reason=None,
        ratio_fg=ratio_fg,
        ratio_gh=ratio_gh,
        predicted_flat_at_w=(ratio_fg == ratio_gh),
    )


# ---------------------------------------------------------------------------
# wall-span classes around a vertex

@dataclass(frozen=True)
class WallSpanClass:
    walls: tuple[tuple[int, ...], ...]
    strongly_connected: bool
    all_flat_wrt_r: bool


@dataclass(frozen=True)
class WallSpanReport:
    applicable: bool
    reason: Optional[str]
    classes: tuple[WallSpanClass, ...] = ()


def wall_span_classes(rc: RealizedComplex, r: int) -> WallSpanReport:
    """Group the walls opposite r (one per star facet) by their span.

    Within a class, adjacency means two walls share all but one vertex —
    equivalently their facets form a crossing over a wall through r; the
    report checks that every such crossing is flat at r.
    """
    rep = audit(rc)
    if not rep.locally_convex.get(r, False):
        return WallSpanReport(False, f"vertex {r} is not locally convex")
    coords = rc.realization.coords
    opposite = sorted(
        tuple(sorted(f - {r})) for f in star(rc.complex, [r])
    )
    groups: dict = {}
    for w in opposite:
        groups.setdefault(span_key([coords[v] for v in w]), []).append(w)
    relations = {
        tuple(sorted(cr.wall)): crep
        for crep in rep.crossings
        for cr in [crep.crossing]
    }
    classes = []
    for key in sorted(groups):
        walls = groups[key]
        adj = {w: [] for w in walls}
        flat_ok = True
        for w1, w2 in itertools.combinations(walls, 2):
            shared = set(w1) & set(w2)
            if len(shared) != len(w1) - 1:
                continue
            adj[w1].append(w2)
            adj[w2].append(w1)
            crossing_wall = tuple(sorted(shared | {r}))
            crep = relations[crossing_wall]
            if crep.classes[r] is not ConvexityClass.FLAT:
                flat_ok = False
        seen = {walls[0]}
        stack = [walls[0]]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        classes.append(
            WallSpanClass(
                walls=tuple(walls),
                strongly_connected=len(seen) == len(walls),
                all_flat_wrt_r=flat_ok,
            )
        )
    return WallSpanReport(True, None, tuple(classes))


# ---------------------------------------------------------------------------
# intersections of two convex star unions

@dataclass(frozen=True)
class StarUnionIntersectionReport:
    applicable: bool
    reason: Optional[str]
    reading: str = "each of y,z opposite to some element of {a,b}"
    walls: tuple[tuple[int, ...], ...] = ()
    same_span: Optional[bool] = None
    wall_counts: Optional[Mapping[tuple[int, int], int]] = None
    bound_d_ok: Optional[bool] = None


def _link_walls(c: Complex, v: int) -> set[frozenset]:
    return {f - {v} for f in star(c, [v])}


def star_union_intersection_check(
    rc: RealizedComplex, a: int, b: int, y: int, z: int
) -> StarUnionIntersectionReport:
    """Span equality and the wall-count bound for two nearby star unions."""
    c = rc.complex
    for e in ((a, b), (y, z)):
        if not c.has_face(set(e)):
            raise FaceNotPresent(f"{{{e[0]},{e[1]}}} is not an edge")
    opposite_of = {}
    for cr in wall_crossings(c):
        opposite_of.setdefault(cr.off_f, set()).add(cr.off_g)
        opposite_of.setdefault(cr.off_g, set()).add(cr.off_f)
    for s in (y, z):
        if not (opposite_of.get(s, set()) & {a, b}):
            return StarUnionIntersectionReport(
                False, f"vertex {s} is not opposite to a or b via any crossing"
            )
    for p, q in ((a, b), (y, z)):
        rep = union_of_stars_convex(rc, p, q)
        if not rep.convex:
            return StarUnionIntersectionReport(
                False, f"star union of {{{p},{q}}} is not convex at {rep.witness}"
            )
    first = _link_walls(c, a) | _link_walls(c, b)
    second = _link_walls(c, y) | _link_walls(c, z)
    common = sorted(tuple(sorted(w)) for w in first & second)
    coords = rc.realization.coords
    keys = {span_key([coords[v] for v in w]) for w in common}
    counts = {}
    for r_v in (a, b):
        for s_v in (y, z):
            counts[(r_v, s_v)] = len(
                _link_walls(c, r_v) & _link_walls(c, s_v)
            )
    d = rc.ambient_dim
    return StarUnionIntersectionReport(
        applicable=True,
        reason=None,
        walls=tuple(common),
        same_span=len(keys) <= 1,
        wall_counts=counts,
        bound_d_ok=all(n <= d for n in counts.values()),
    )


# ---------------------------------------------------------------------------
# external contraction effect on a contraction interval

@dataclass(frozen=True)
class SeparationEntry:
    facet: tuple[int, ...]
    partner_vertex: int
    ref_vertex: int
    c_z: Fraction
    eta_before: Fraction
    eta_after: Optional[Fraction]
    threshold: Fraction
    persists: bool
    moved_toward: Optional[str]


@dataclass(frozen=True)
class ExternalContractionReport:
    case: str
    cspace_before: ContractionSpaceResult
    cspace_after: Optional[ContractionSpaceResult]
    observed_edge_after: Optional[tuple[int, int]]
    equality_expected: bool
    equality_ok: Optional[bool]
    entries: tuple[SeparationEntry, ...] = ()


def _interval_signature(res: ContractionSpaceResult):
    return (res.status, res.interval.as_pair())


def external_contraction_effect(
    rc: RealizedComplex, e, contracted, omega
) -> ExternalContractionReport:
    """Contract a nearby edge and report its effect on the interval of `e`.

    When the contracted edge shares an endpoint with `e`, each crossing
    hyperplane that separates the endpoints of `e` contributes an entry
    with the coefficient of the contracted far vertex in the expansion of
    the separating point, the persistence threshold for that coefficient,
    and which endpoint the separating point moved toward.
    """
    a, b = sorted(e)
    y, z = sorted(contracted)
    c = rc.complex
    for pair in ((a, b), (y, z)):
        if not c.has_face(set(pair)):
            raise FaceNotPresent(f"{{{pair[0]},{pair[1]}}} is not an edge")
    if {a, b} == {y, z}:
        raise ValidationError("contracted edge must differ from the observed edge")

    shared = {a, b} & {y, z}
    union_vertices = set().union(
        *(star(c, [a]) | star(c, [b]))
    )
    opposite = set()
    for cr in wall_crossings(c):
        if cr.off_f in (a, b):
            opposite.add(cr.off_g)
        if cr.off_g in (a, b):
            opposite.add(cr.off_f)
    if shared:
        case = "endpoint"
    elif {y, z} & union_vertices or {y, z} & opposite:
        labels = []
        if {y, z} & opposite:
            labels.append("opposite")
        if {y, z} & set(link(c, [a]).vertices + link(c, [b]).vertices):
            labels.append("on_wall")
        case = "nontrivial:" + "+".join(labels or ["star"])
    else:
        case = "trivial"

    cspace_before = contraction_space(rc, (a, b))

    entries = []
    if shared:
        sh = shared.pop()
        far = ({y, z} - {sh}).pop()
        # alpha in x_u = (1-alpha)*x_sh + alpha*x_far
        alpha = Fraction(omega) if sh == y else 1 - Fraction(omega)
        coords = rc.realization.coords
        table: dict[frozenset, list] = {}
        for f in c.facets:
            for v in f:
                table.setdefault(f - {v}, []).append(f)
        for g in sorted(star(c, [sh, far]), key=lambda s: tuple(sorted(s))):
            wall = g - {sh}
            partner = next(f for f in table[wall] if f != g)
            bp = next(iter(partner - wall))
            if bp in union_vertices:
                continue
            for r in sorted(g - {sh, far}):
                span_verts = sorted((g - {sh, r}) | {bp})
                n = hyperplane_normal([coords[v] for v in span_verts])
                sa, sb = dot(n, coords[a]), dot(n, coords[b])
                if sa == 0 or sb == 0 or (sa > 0) == (sb > 0):
                    continue  # hyperplane does not separate a from b
                eta = sa / (sa - sb)
                point = interpolate(coords[a], coords[b], eta)
                status, sol = linear_solve(
                    [coords[v] for v in span_verts], point
                )
                assert status == "unique"
                c_z = dict(zip(span_verts, sol))[far]
                threshold = -eta * alpha / (1 - alpha)
                # rebuild the hyperplane with the contraction point in place of far
                u = interpolate(coords[sh], coords[far], alpha)
                cols2 = [
                    u if v == far else coords[v] for v in span_verts
                ]
                eta_after = None
                moved = None
                try:
                    n2 = hyperplane_normal(cols2)
                except DegenerateSpan:
                    n2 = None
                if n2 is not None:
                    sa2, sb2 = dot(n2, coords[a]), dot(n2, coords[b])
                    if sa2 != 0 and sb2 != 0 and (sa2 > 0) != (sb2 > 0):
                        eta_after = sa2 / (sa2 - sb2)
                        if eta_after > eta:
                            moved = "b"
                        elif eta_after < eta:
                            moved = "a"
                        else:
                            moved = "none"
                entries.append(
                    SeparationEntry(
                        facet=tuple(sorted(g)),
                        partner_vertex=bp,
                        ref_vertex=r,
                        c_z=c_z,
                        eta_before=eta,
                        eta_after=eta_after,
                        threshold=threshold,
                        persists=c_z > threshold,
                        moved_toward=moved,
                    )
                )

    rc2, _warnings = contract_edge(rc, (y, z), t=Fraction(omega))
    w_new = rc2.move_log[-1].w
    subst = {y: w_new, z: w_new}
    a2, b2 = subst.get(a, a), subst.get(b, b)
    cspace_after = None
    observed_after = None
    if a2 != b2 and rc2.complex.has_face({a2, b2}):
        observed_after = tuple(sorted((a2, b2)))
        cspace_after = contraction_space(rc2, observed_after)

    equality_expected = case == "trivial"
    equality_ok = None
    if cspace_after is not None:
        equality_ok = _interval_signature(cspace_before) == _interval_signature(
            cspace_after
        )
    return ExternalContractionReport(
        case=case,
        cspace_before=cspace_before,
        cspace_after=cspace_after,
        observed_edge_after=observed_after,
        equality_expected=equality_expected,
        equality_ok=equality_ok,
        entries=tuple(entries),
    )


# ---------------------------------------------------------------------------
# external subdivision effect on a contraction interval

@dataclass(frozen=True)
class SubdivisionEffectReport:
    case: str
    expectation: str
    expectation_ok: bool
    cspace_before: ContractionSpaceResult
    cspace_after: ContractionSpaceResult


def subdivision_effect_cases(
    rc: RealizedComplex, e, subdivided, eta=Fraction(1, 2)
) -> SubdivisionEffectReport:
    """Subdivide a nearby edge and check the predicted interval behaviour.

    Cases by adjacency of the subdivided edge to e = {a,b}: outside the
    star union it leaves the interval unchanged (1a) or can only grow it
    (1b, one endpoint on a link); inside the union the interval collapses
    to nothing, a point, or everything (2a/2b), and is empty outright
    when the edge runs from an endpoint to a common link vertex.
    """
    a, b = sorted(e)
    y, z = sorted(subdivided)
    c = rc.complex
    for pair in ((a, b), (y, z)):
        if not c.has_face(set(pair)):
            raise FaceNotPresent(f"{{{pair[0]},{pair[1]}}} is not an edge")
    if {a, b} == {y, z}:
        raise ValidationError("subdivided edge must differ from the observed edge")

    union_facets = star(c, [a]) | star(c, [b])
    in_support = any({y, z} <= f for f in union_facets)
    lk_union = set(link(c, [a]).vertices) | set(link(c, [b]).vertices)
    if not in_support:
        if y not in lk_union and z not in lk_union:
            case, expectation = "1a", "equal"
        else:
            case, expectation = "1b", "contains"
    else:
        if y not in (a, b) and z not in (a, b):
            case, expectation = "2a", "trichotomy"
        else:
            far = z if y in (a, b) else y
            both = set(link(c, [a]).vertices) & set(link(c, [b]).vertices)
            if far in both:
                case, expectation = "2b-common-link", "empty"
            else:
                case, expectation = "2b", "trichotomy"

    cspace_before = contraction_space(rc, (a, b))
    rc2 = subdivide_edge(rc, (y, z), eta=Fraction(eta))
    cspace_after = contraction_space(rc2, (a, b))

    if expectation == "equal":
        ok = _interval_signature(cspace_before) == _interval_signature(cspace_after)
    elif expectation == "contains":
        if cspace_before.status is SpaceStatus.EMPTY:
            ok = True
        elif cspace_after.status is SpaceStatus.EMPTY:
            ok = False
        else:
            ok = (
                cspace_after.interval.t_lo <= cspace_before.interval.t_lo
                and cspace_after.interval.t_hi >= cspace_before.interval.t_hi
            )
    elif expectation == "empty":
        ok = cspace_after.status is SpaceStatus.EMPTY
    else:
        ok = cspace_after.status in (
            SpaceStatus.EMPTY,
            SpaceStatus.POINT,
            SpaceStatus.WHOLE_SEGMENT,
        )
    return SubdivisionEffectReport(
        case=case,
        expectation=expectation,
        expectation_ok=ok,
        cspace_before=cspace_before,
        cspace_after=cspace_after,
    )
