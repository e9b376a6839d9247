"""Realized complexes: exact coordinates, wall relations, moves, audits.

A realization assigns to every vertex a vector in Q^d such that the
vectors of each facet form a basis.  Walls are classified through the
unique linear relation supported on the union of the two facets meeting
at the wall.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .complex_core import (
    Complex,
    Contract,
    Subdivide,
    Suspend,
    WallCrossing,
    contract_edge_abstract,
    star,
    subdivide_edge_abstract,
    suspend_abstract,
    wall_crossings,
)
from .errors import (
    DegenerateCrossing,
    FacetDegenerate,
    RankDeficient,
    ValidationError,
)
from .exact_geometry import (
    ConvexityClass,
    RatVec,
    dot,
    hyperplane_normal,
    interpolate,
    linear_solve,
    nullspace_line,
    rank,
    vscale,
)


@dataclass(frozen=True)
class Realization:
    ambient_dim: int
    coords: Mapping[int, RatVec]

    def __getitem__(self, v: int) -> RatVec:
        return self.coords[v]


def validate_realization(c: Complex, r: Realization) -> None:
    d = r.ambient_dim
    for v in c.vertices:
        if v not in r.coords:
            raise ValidationError(f"vertex {v} has no coordinates")
        if len(r.coords[v]) != d:
            raise ValidationError(f"vertex {v} has a vector of wrong length")
    if not c.is_pure or c.dim != d - 1:
        raise ValidationError(
            f"facets must have exactly {d} vertices in ambient dimension {d}"
        )
    for f in c.facets:
        cols = [r.coords[v] for v in f]
        if rank(cols) != d:
            raise FacetDegenerate(f"facet {sorted(f)} is degenerate")


@dataclass(frozen=True)
class RealizedComplex:
    complex: Complex
    realization: Realization
    move_log: tuple = ()

    def __post_init__(self):
        validate_realization(self.complex, self.realization)

    def coord(self, v: int) -> RatVec:
        return self.realization.coords[v]

    @property
    def ambient_dim(self) -> int:
        return self.realization.ambient_dim


def fresh_vertex(c: Complex) -> int:
    return max(abs(v) for v in c.vertices) + 1


# ---------------------------------------------------------------------------
# generators

def cross_polytope(d: int) -> RealizedComplex:
    """Boundary of the d-dimensional cross polytope, vertices ±1..±d at ±e_i."""
    if d < 1:
        raise ValidationError("dimension must be positive")
    coords = {}
    for i in range(1, d + 1):
        e = tuple(Fraction(int(j == i)) for j in range(1, d + 1))
        coords[i] = e
        coords[-i] = vscale(Fraction(-1), e)
    facets = [
        [s * i for i, s in zip(range(1, d + 1), signs)]
        for signs in itertools.product((1, -1), repeat=d)
    ]
    return RealizedComplex(Complex(facets), Realization(d, coords))


def hexagon() -> RealizedComplex:
    """A hexagon cycle with one reflex-free but non-symmetric realization."""
    pts = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
    coords = {
        i + 1: (Fraction(x), Fraction(y)) for i, (x, y) in enumerate(pts)
    }
    facets = [[i + 1, (i + 1) % 6 + 1] for i in range(6)]
    return RealizedComplex(Complex(facets), Realization(2, coords))


# ---------------------------------------------------------------------------
# wall relations

@dataclass(frozen=True)
class WallRelation:
    """The relation sum_v coeffs[v] * x_v = 0 across a wall.

    Normalized so that both off-wall coefficients are positive and the
    smaller off-wall vertex has coefficient exactly 1.
    """

    crossing: WallCrossing
    coeffs: Mapping[int, Fraction]

    def coefficient(self, v: int) -> Fraction:
        return self.coeffs[v]


def wall_relation(assign: Mapping[int, RatVec], crossing: WallCrossing) -> WallRelation:
    verts = sorted(set(crossing.wall) | {crossing.off_f, crossing.off_g})
    cols = [assign[v] for v in verts]
    d = len(cols[0])
    if rank(cols) < d:
        raise RankDeficient(
            f"vertices {verts} span a space of dimension < {d}"
        )
    kern = nullspace_line(cols)
    coeffs = dict(zip(verts, kern))
    cf, cg = coeffs[crossing.off_f], coeffs[crossing.off_g]
    if cf == 0 or cg == 0 or (cf > 0) != (cg > 0):
        raise DegenerateCrossing(
            f"off-wall coefficients {cf}, {cg} at wall {list(crossing.wall)}"
        )
    scale = 1 / cf
    return WallRelation(
        crossing=crossing,
        coeffs={v: scale * x for v, x in coeffs.items()},
    )


def classify_crossing(rel: WallRelation) -> dict[int, ConvexityClass]:
    """Convexity class of the crossing at each wall vertex."""
    out = {}
    for m in rel.crossing.wall:
        c = rel.coeffs[m]
        if c < 0:
            out[m] = ConvexityClass.STRICTLY_CONVEX
        elif c == 0:
            out[m] = ConvexityClass.FLAT
        else:
            out[m] = ConvexityClass.STRICTLY_CONCAVE
    return out


# ---------------------------------------------------------------------------
# audits

@dataclass(frozen=True)
class CrossingReport:
    crossing: WallCrossing
    relation: WallRelation
    classes: Mapping[int, ConvexityClass]

    @property
    def convex(self) -> bool:
        return all(
            cl is not ConvexityClass.STRICTLY_CONCAVE
            for cl in self.classes.values()
        )


@dataclass(frozen=True)
class AuditReport:
    crossings: tuple[CrossingReport, ...]
    locally_convex: Mapping[int, bool]
    all_crossings_convex: bool
    flat_pairs: tuple[tuple[tuple[int, ...], int], ...]
    complete: bool = True

    def relation_at(self, wall: Iterable[int]) -> WallRelation:
        w = tuple(sorted(wall))
        for rep in self.crossings:
            if rep.crossing.wall == w:
                return rep.relation
        raise KeyError(f"no crossing at wall {w}")


def audit(
    rc: RealizedComplex,
    stop_on_nonconvex: bool = False,
    focus: Optional[int] = None,
) -> AuditReport:
    """Classify every wall crossing and summarize convexity.

    With stop_on_nonconvex the scan aborts at the first strictly concave
    class; crossings touching `focus` are scanned first so that audits of
    a freshly contracted vertex fail fast.
    """
    crossings = wall_crossings(rc.complex)
    if focus is not None:
        crossings = tuple(
            sorted(crossings, key=lambda cr: focus not in cr.wall)
        )
    assign = rc.realization.coords
    reports = []
    flat = []
    convex_at = {v: True for v in rc.complex.vertices}
    all_convex = True
    complete = True
    for cr in crossings:
        rel = wall_relation(assign, cr)
        classes = classify_crossing(rel)
        reports.append(CrossingReport(cr, rel, classes))
        for m, cl in classes.items():
            if cl is ConvexityClass.STRICTLY_CONCAVE:
                convex_at[m] = False
                all_convex = False
            elif cl is ConvexityClass.FLAT:
                flat.append((cr.wall, m))
        if stop_on_nonconvex and not all_convex:
            complete = False
            break
    return AuditReport(
        crossings=tuple(reports),
        locally_convex=convex_at,
        all_crossings_convex=all_convex,
        flat_pairs=tuple(sorted(flat)),
        complete=complete,
    )


def point_in_facet_cone(
    rc: RealizedComplex, facet: Iterable[int], point: RatVec
) -> tuple[bool, Optional[tuple[Fraction, ...]]]:
    """Membership of `point` in the nonnegative span of a facet's vectors."""
    verts = sorted(facet)
    status, sol = linear_solve([rc.coord(v) for v in verts], point)
    assert status == "unique", "facet vectors form a basis"
    ok = all(x >= 0 for x in sol)
    return ok, sol


@dataclass(frozen=True)
class BoundaryWall:
    wall: tuple[int, ...]
    facet: tuple[int, ...]
    normal: RatVec  # oriented toward the facet's off-wall vertex


@dataclass(frozen=True)
class StarUnionReport:
    convex: bool
    witness: Optional[tuple[tuple[int, ...], int]]
    boundary_walls: tuple[BoundaryWall, ...]
    vertices: tuple[int, ...]


def union_of_stars_convex(rc: RealizedComplex, a: int, b: int) -> StarUnionReport:
    """Whether the union of the closed stars of `a` and `b` is convex.

    The union's boundary walls are the walls lying in exactly one of its
    facets; each is oriented toward the off-wall vertex of that facet.
    The union is convex when every vertex of the union sits weakly on the
    inner side of every boundary wall.  The witness is the first failing
    (wall, vertex) pair in sorted order.
    """
    s_facets = star(rc.complex, [a]) | star(rc.complex, [b])
    count: dict[frozenset, list] = {}
    for f in s_facets:
        for v in f:
            count.setdefault(f - {v}, []).append(f)
    boundary = []
    for w, fs in sorted(
        count.items(), key=lambda kv: tuple(sorted(kv[0]))
    ):
        if len(fs) != 1:
            continue
        f = fs[0]
        u = next(iter(f - w))
        n = hyperplane_normal([rc.coord(x) for x in sorted(w)])
        sign = dot(n, rc.coord(u))
        assert sign != 0, "off-wall vertex of a facet cannot lie on its wall"
        if sign < 0:
            n = vscale(Fraction(-1), n)
        boundary.append(
            BoundaryWall(tuple(sorted(w)), tuple(sorted(f)), n)
        )
    verts = tuple(sorted(set().union(*s_facets)))
    witness = None
    for bw in boundary:
        for z in verts:
            if dot(bw.normal, rc.coord(z)) < 0:
                witness = (bw.wall, z)
                break
        if witness:
            break
    return StarUnionReport(
        convex=witness is None,
        witness=witness,
        boundary_walls=tuple(boundary),
        vertices=verts,
    )


# ---------------------------------------------------------------------------
# moves

def subdivide_edge(
    rc: RealizedComplex,
    e: Iterable[int],
    v: Optional[int] = None,
    eta=Fraction(1, 2),
    coords: Optional[RatVec] = None,
    alpha=None,
    beta=None,
) -> RealizedComplex:
    """Split the edge `e` at (1-eta)*x_a + eta*x_b with a fresh vertex.

    Explicit `coords` override the interpolation.  alpha/beta are carried
    on the move record for parameter-matrix replays and do not affect the
    geometry.
    """
    a, b = sorted(e)
    if v is None:
        v = fresh_vertex(rc.complex)
    c2 = subdivide_edge_abstract(rc.complex, (a, b), v)
    if coords is None:
        eta = Fraction(eta)
        if not 0 < eta < 1:
            raise ValidationError("subdivision parameter must lie in (0, 1)")
        x = interpolate(rc.coord(a), rc.coord(b), eta)
    else:
        x = tuple(Fraction(t) for t in coords)
        eta = None
    new_coords = dict(rc.realization.coords)
    for u in list(new_coords):
        if u not in c2.vertices:
            del new_coords[u]
    new_coords[v] = x
    rec = Subdivide(a=a, b=b, v=v, eta=eta, alpha=alpha, beta=beta, coords=x)
    return RealizedComplex(
        c2,
        Realization(rc.ambient_dim, new_coords),
        rc.move_log + (rec,),
    )


def contract_edge(
    rc: RealizedComplex,
    e: Iterable[int],
    w: Optional[int] = None,
    t=Fraction(1, 2),
    coords: Optional[RatVec] = None,
    omega=None,
) -> tuple[RealizedComplex, tuple]:
    """Contract the edge `e` to a fresh vertex at (1-t)*x_a + t*x_b.

    Returns the contracted complex and the combinatorial warnings.  Raises
    FacetDegenerate when the chosen point flattens a surviving facet.
    """
    a, b = sorted(e)
    if w is None:
        w = fresh_vertex(rc.complex)
    c2, warnings = contract_edge_abstract(rc.complex, (a, b), w)
    if coords is None:
        t = Fraction(t)
        x = interpolate(rc.coord(a), rc.coord(b), t)
    else:
        x = tuple(Fraction(s) for s in coords)
        t = None
    new_coords = {u: rc.realization.coords[u] for u in c2.vertices if u != w}
    new_coords[w] = x
    rec = Contract(a=a, b=b, w=w, t=t, omega=omega, coords=x)
    out = RealizedComplex(
        c2,
        Realization(rc.ambient_dim, new_coords),
        rc.move_log + (rec,),
    )
    return out, warnings


def suspend(
    rc: RealizedComplex,
    p: Optional[int] = None,
    q: Optional[int] = None,
    coords: Optional[RatVec] = None,
) -> RealizedComplex:
    """Suspend with antipodal poles x_q = -x_p in one more dimension.

    By default the poles are ±m for the next unused id m and x_p is the
    new coordinate axis.
    """
    if p is None and q is None:
        p = fresh_vertex(rc.complex)
        q = -p
    if p is None or q is None:
        raise ValidationError("give both poles or neither")
    c2 = suspend_abstract(rc.complex, p, q)
    d = rc.ambient_dim + 1
    if coords is None:
        xp = tuple(Fraction(int(i == d - 1)) for i in range(d))
    else:
        xp = tuple(Fraction(t) for t in coords)
        if len(xp) != d:
            raise ValidationError(f"pole vector must have length {d}")
    new_coords = {
        u: x + (Fraction(0),) for u, x in rc.realization.coords.items()
    }
    new_coords[p] = xp
    new_coords[q] = vscale(Fraction(-1), xp)
    rec = Suspend(p=p, q=q, coords=xp)
    return RealizedComplex(
        c2, Realization(d, new_coords), rc.move_log + (rec,)
    )
