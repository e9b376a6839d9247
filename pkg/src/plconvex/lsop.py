"""Linear systems of parameters and their behaviour under moves.

An Lsop stores d linear forms on the vertex variables as a d x n matrix;
the column of a vertex is its coefficient vector across the forms.  The
defining property is that every facet's columns are linearly independent.
Moves update columns: suspensions append a row, subdivisions combine the
endpoint columns, contractions interpolate them with a generic weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .complex_core import Complex, Contract, Subdivide, Suspend, star
from .errors import (
    FaceNotPresent,
    ImproperColoring,
    Inconsistent,
    NotPseudomanifold,
    OmegaExcluded,
    ReplayMismatch,
    ShapeMismatch,
    Underdetermined,
    VertexCollision,
    ZeroWeight,
)
from .exact_geometry import RatVec, dot, linear_solve, perp_basis, rank, vadd, vscale
from .realization import (
    Realization,
    RealizedComplex,
    WallRelation,
    classify_crossing,
    validate_realization,
    wall_relation,
)
from .complex_core import wall_crossings


@dataclass(frozen=True)
class Lsop:
    vertices: tuple[int, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.vertices)
        if any(len(r) != n for r in self.rows):
            raise ShapeMismatch("row length does not match vertex count")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def column(self, v: int) -> RatVec:
        j = self.vertices.index(v)
        return tuple(r[j] for r in self.rows)

    def columns(self) -> dict[int, RatVec]:
        return {v: self.column(v) for v in self.vertices}

    @staticmethod
    def from_columns(cols: Mapping[int, RatVec]) -> "Lsop":
        verts = tuple(sorted(cols))
        nr = len(next(iter(cols.values())))
        if any(len(cols[v]) != nr for v in verts):
            raise ShapeMismatch("columns of unequal length")
        rows = tuple(
            tuple(cols[v][i] for v in verts) for i in range(nr)
        )
        return Lsop(verts, rows)


def standard_cross_polytope_lsop(d: int) -> Lsop:
    """theta_i = x_i + x_{-i} on the vertex set ±1..±d."""
    cols = {}
    for i in range(1, d + 1):
        e = tuple(Fraction(int(j == i)) for j in range(1, d + 1))
        cols[i] = e
        cols[-i] = e
    return Lsop.from_columns(cols)


def is_lsop(c: Complex, l: Lsop) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Full column rank on every facet; witness = first failing facet."""
    if set(l.vertices) != set(c.vertices):
        raise ShapeMismatch("columns do not match the vertex set")
    if l.nrows != c.dim + 1:
        raise ShapeMismatch(
            f"{l.nrows} forms for a complex of dimension {c.dim}"
        )
    for f in c.sorted_facets():
        if rank([l.column(v) for v in f]) != len(f):
            return False, f
    return True, None


def balanced_lsop(c: Complex, coloring: Mapping[int, int]) -> Lsop:
    """theta_i = sum of the variables colored i, for a proper coloring."""
    for v in c.vertices:
        if v not in coloring:
            raise ShapeMismatch(f"vertex {v} is uncolored")
    for e in sorted(tuple(sorted(x)) for x in c.edges):
        if coloring[e[0]] == coloring[e[1]]:
            raise ImproperColoring(f"edge {e} is monochromatic")
    colors = sorted(set(coloring[v] for v in c.vertices))
    if len(colors) != c.dim + 1:
        raise ShapeMismatch(
            f"{len(colors)} colors for a complex of dimension {c.dim}"
        )
    index = {col: i for i, col in enumerate(colors)}
    cols = {}
    for v in c.vertices:
        e = [Fraction(0)] * len(colors)
        e[index[coloring[v]]] = Fraction(1)
        cols[v] = tuple(e)
    return Lsop.from_columns(cols)


def suspend_lsop(l: Lsop, p: int, q: int) -> Lsop:
    if p in l.vertices or q in l.vertices:
        raise VertexCollision("suspension poles already have columns")
    cols = {v: col + (Fraction(0),) for v, col in l.columns().items()}
    pole = tuple(Fraction(0) for _ in range(l.nrows)) + (Fraction(1),)
    cols[p] = pole
    cols[q] = pole
    return Lsop.from_columns(cols)


def subdivide_lsop(
    l: Lsop,
    a: int,
    b: int,
    v: int,
    alpha=Fraction(-1, 2),
    beta=Fraction(-1, 2),
) -> Lsop:
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha == 0 or beta == 0:
        raise ZeroWeight("subdivision weights must be nonzero")
    if v in l.vertices:
        raise VertexCollision(f"vertex {v} already has a column")
    cols = l.columns()
    cols[v] = vadd(vscale(alpha, cols[a]), vscale(beta, cols[b]))
    return Lsop.from_columns(cols)


@dataclass(frozen=True)
class ExclusionSet:
    """Contraction weights that break some surviving link facet.

    facets_for maps each excluded weight to the link facets G whose span
    catches the interpolated column there; the degenerate facet of the
    contraction is then G together with the new vertex.  always_bad lists
    facets whose span contains the whole interpolation line.
    """

    by_omega: Mapping[Fraction, tuple[tuple[int, ...], ...]]
    always_bad: tuple[tuple[int, ...], ...] = ()

    def __contains__(self, omega) -> bool:
        return Fraction(omega) in self.by_omega

    def __iter__(self):
        return iter(sorted(self.by_omega))

    def omegas(self) -> frozenset:
        return frozenset(self.by_omega)

    def facets_for(self, omega) -> tuple[tuple[int, ...], ...]:
        return self.by_omega[Fraction(omega)]


def _surviving_link_facets(c: Complex, a: int, b: int):
    """Facets of lk(a) avoiding b and of lk(b) avoiding a, deduplicated."""
    out = set()
    for p, other in ((a, b), (b, a)):
        for f in star(c, [p]):
            if other in f:
                continue
            out.add(f - {p})
    return sorted(out, key=lambda g: tuple(sorted(g)))


def exclusion_set(l: Lsop, c: Complex, a: int, b: int) -> ExclusionSet:
    """All ω for which (1-ω)·θ|_a + ω·θ|_b hits a surviving facet span."""
    if not c.has_face({a, b}):
        raise FaceNotPresent(f"{{{a},{b}}} is not an edge")
    ca, cb = l.column(a), l.column(b)
    by_omega: dict[Fraction, list] = {}
    always = []
    for g in _surviving_link_facets(c, a, b):
        gt = tuple(sorted(g))
        cols = [l.column(v) for v in gt]
        pinned: Optional[Fraction] = None
        impossible = False
        restricted = False
        for phi in perp_basis(cols):
            const = dot(phi, ca)
            slope = dot(phi, cb) - const
            if slope == 0:
                if const != 0:
                    impossible = True
                    break
                continue  # the whole line satisfies this functional
            root = -const / slope
            restricted = True
            if pinned is None:
                pinned = root
            elif pinned != root:
                impossible = True
                break
        if impossible:
            continue
        if not restricted:
            always.append(gt)
            continue
        by_omega.setdefault(pinned, []).append(gt)
    return ExclusionSet(
        by_omega={k: tuple(v) for k, v in by_omega.items()},
        always_bad=tuple(always),
    )


def contract_lsop(
    l: Lsop,
    c: Complex,
    a: int,
    b: int,
    w: int,
    omega,
    check: bool = True,
) -> Lsop:
    """Column of w = (1-ω)·θ|_a + ω·θ|_b; a and b are dropped.

    ω = 0 is rejected outright; with check=True any ω in the exclusion
    set is rejected with the offending facets reported.
    """
    omega = Fraction(omega)
    if omega == 0:
        raise OmegaExcluded("contraction weight 0 is never allowed")
    if check:
        excl = exclusion_set(l, c, a, b)
        if excl.always_bad:
            raise OmegaExcluded(
                f"facets {list(excl.always_bad)} degenerate for every weight"
            )
        if omega in excl:
            raise OmegaExcluded(
                f"weight {omega} degenerates link facets {list(excl.facets_for(omega))}"
            )
    cols = l.columns()
    if w in cols:
        raise VertexCollision(f"vertex {w} already has a column")
    new = vadd(vscale(1 - omega, cols[a]), vscale(omega, cols[b]))
    del cols[a], cols[b]
    cols[w] = new
    return Lsop.from_columns(cols)


def choose_generic_omega(
    l: Lsop, c: Complex, a: int, b: int, target=Fraction(1, 2)
) -> Fraction:
    """Deterministic admissible weight: nearest to target, smallest
    denominator, then smallest value, scanning rationals in (0, 1]."""
    target = Fraction(target)
    excl = exclusion_set(l, c, a, b)
    if excl.always_bad:
        raise OmegaExcluded(
            f"facets {list(excl.always_bad)} degenerate for every weight"
        )
    seen = set()
    candidates = []
    for q in range(1, 65):
        for p in range(1, q + 1):
            cand = Fraction(p, q)
            if cand in seen:
                continue
            seen.add(cand)
            candidates.append(cand)
    candidates.sort(key=lambda x: (abs(x - target), x.denominator, x))
    for cand in candidates:
        if cand not in excl:
            return cand
    raise OmegaExcluded("no admissible weight with denominator up to 64")


def realize_from_lsop(
    l: Lsop, c: Complex, seed: Mapping[int, RatVec]
) -> Realization:
    """Solve the vector equations sum_p θ_{i,p} x_p = 0 given seeded vertices.

    Each of the d forms gives one equation in the ambient space; the seed
    must leave a uniquely solvable system for the remaining vertices.
    """
    if set(l.vertices) != set(c.vertices):
        raise ShapeMismatch("columns do not match the vertex set")
    for v in seed:
        if v not in l.vertices:
            raise ShapeMismatch(f"seeded vertex {v} is not in the complex")
    lengths = {len(x) for x in seed.values()}
    if len(lengths) != 1:
        raise ShapeMismatch("seed vectors of unequal length")
    ambient = lengths.pop()
    free = [v for v in l.vertices if v not in seed]
    cols = [l.column(v) for v in free]
    coords: dict[int, list] = {v: [None] * ambient for v in free}
    for j in range(ambient):
        rhs = tuple(
            -sum(
                (l.column(s)[i] * Fraction(seed[s][j]) for s in seed),
                Fraction(0),
            )
            for i in range(l.nrows)
        )
        status, sol = linear_solve(cols, rhs)
        if status == "many":
            raise Underdetermined("seed leaves more than one solution")
        if status == "none":
            raise Inconsistent("seed admits no exact solution")
        for v, x in zip(free, sol):
            coords[v][j] = x
    assign = {v: tuple(Fraction(x) for x in seed[v]) for v in seed}
    assign.update({v: tuple(xs) for v, xs in coords.items()})
    realization = Realization(ambient, assign)
    validate_realization(c, realization)
    return realization


def default_seed(rc: RealizedComplex) -> dict[int, RatVec]:
    """Current coordinates of everything outside the first facet.

    The free vertices are then exactly one facet, whose columns are
    independent in any valid parameter matrix, so the solve is square.
    """
    f0 = rc.complex.sorted_facets()[0]
    return {
        v: rc.coord(v) for v in rc.complex.vertices if v not in f0
    }


@dataclass(frozen=True)
class LsopWallReport:
    wall: tuple[int, ...]
    seed: Mapping[int, RatVec]
    realization: Realization
    relation: WallRelation
    classes: Mapping[int, object]


def lsop_wall_classification(
    c: Complex, l: Lsop, wall: Iterable[int], seed: Mapping[int, RatVec]
) -> LsopWallReport:
    """Classify the crossing at `wall` in the realization solved from seed."""
    w = frozenset(wall)
    realization = realize_from_lsop(l, c, seed)
    match = [cr for cr in wall_crossings(c) if cr.wall_set == w]
    if not match:
        raise NotPseudomanifold(f"no crossing at wall {sorted(w)}")
    rel = wall_relation(realization.coords, match[0])
    return LsopWallReport(
        wall=tuple(sorted(w)),
        seed={v: tuple(x) for v, x in seed.items()},
        realization=realization,
        relation=rel,
        classes=classify_crossing(rel),
    )


# ---------------------------------------------------------------------------
# provenance tracing

@dataclass(frozen=True)
class TraceEvent:
    """Introduction of a column: base matrix, suspension pole, or
    subdivision combination.  `column` is the column at introduction
    time; it is zero-extended when later suspensions add rows."""

    kind: str  # "base" | "suspend" | "subdivide"
    vertex: int
    move_index: int  # -1 for base columns
    column: RatVec


@dataclass(frozen=True)
class ProvenanceExpansion:
    nrows: int
    columns: Mapping[int, RatVec]
    entries: Mapping[int, tuple[tuple[TraceEvent, Fraction], ...]]
    base_entries: Mapping[int, tuple[tuple[TraceEvent, Fraction], ...]]
    events: tuple[TraceEvent, ...]

    def reassemble(self, v: int) -> RatVec:
        out = [Fraction(0)] * self.nrows
        for ev, wt in self.entries[v]:
            for i, x in enumerate(ev.column):
                out[i] += wt * x
        return tuple(out)


def _merge(*weighted):
    acc: dict = {}
    for wt, entry in weighted:
        for ev, w in entry:
            acc[ev] = acc.get(ev, Fraction(0)) + wt * w
    return tuple((ev, w) for ev, w in acc.items() if w != 0)


def trace_coefficients(move_log: Sequence, base: Lsop) -> ProvenanceExpansion:
    """Express every current column over its introduction events.

    Contraction vertices are expanded through both inputs; suspension and
    subdivision vertices terminate the expansion.  A second expansion
    also resolves subdivision events down to base and suspension columns.
    """
    cols = base.columns()
    nrows = base.nrows
    events = []
    entries: dict[int, tuple] = {}
    base_entries: dict[int, tuple] = {}
    for v in base.vertices:
        ev = TraceEvent("base", v, -1, base.column(v))
        events.append(ev)
        entries[v] = ((ev, Fraction(1)),)
        base_entries[v] = ((ev, Fraction(1)),)

    for idx, move in enumerate(move_log):
        if isinstance(move, Suspend):
            p, q = move.p, move.q
            if p in cols or q in cols:
                raise ReplayMismatch(f"move {idx}: pole already present")
            cols = {v: col + (Fraction(0),) for v, col in cols.items()}
            nrows += 1
            pole = tuple(Fraction(0) for _ in range(nrows - 1)) + (Fraction(1),)
            for u in (p, q):
                cols[u] = pole
                ev = TraceEvent("suspend", u, idx, pole)
                events.append(ev)
                entries[u] = ((ev, Fraction(1)),)
                base_entries[u] = ((ev, Fraction(1)),)
        elif isinstance(move, Subdivide):
            a, b, v = move.a, move.b, move.v
            if a not in cols or b not in cols or v in cols:
                raise ReplayMismatch(f"move {idx}: bad subdivision vertices")
            alpha = Fraction(move.alpha) if move.alpha is not None else Fraction(-1, 2)
            beta = Fraction(move.beta) if move.beta is not None else Fraction(-1, 2)
            if alpha == 0 or beta == 0:
                raise ZeroWeight(f"move {idx}: zero subdivision weight")
            cols[v] = vadd(vscale(alpha, cols[a]), vscale(beta, cols[b]))
            ev = TraceEvent("subdivide", v, idx, cols[v])
            events.append(ev)
            entries[v] = ((ev, Fraction(1)),)
            base_entries[v] = _merge(
                (alpha, base_entries[a]), (beta, base_entries[b])
            )
        elif isinstance(move, Contract):
            a, b, w = move.a, move.b, move.w
            if a not in cols or b not in cols or w in cols:
                raise ReplayMismatch(f"move {idx}: bad contraction vertices")
            omega = Fraction(move.omega) if move.omega is not None else Fraction(1, 2)
            cols[w] = vadd(
                vscale(1 - omega, cols[a]), vscale(omega, cols[b])
            )
            entries[w] = _merge(
                (1 - omega, entries[a]), (omega, entries[b])
            )
            base_entries[w] = _merge(
                (1 - omega, base_entries[a]), (omega, base_entries[b])
            )
            for u in (a, b):
                del cols[u], entries[u], base_entries[u]
        else:
            raise ReplayMismatch(f"move {idx}: unknown move {move!r}")

    out = ProvenanceExpansion(
        nrows=nrows,
        columns={v: cols[v] for v in sorted(cols)},
        entries={v: entries[v] for v in sorted(cols)},
        base_entries={v: base_entries[v] for v in sorted(cols)},
        events=tuple(events),
    )
    for v in cols:
        if out.reassemble(v) != cols[v]:
            raise ReplayMismatch(f"expansion of {v} does not reproduce its column")
    return out
