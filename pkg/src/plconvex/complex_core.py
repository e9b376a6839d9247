"""Combinatorial side: complexes, links, moves, pseudomanifold checks.

Vertices are nonzero integers (0 is reserved so that antipodal ids ±k can
be used by generators).  A Complex stores only its maximal faces; anything
non-maximal passed to the constructor is silently dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import (
    EmptyComplex,
    FaceNotPresent,
    NotPseudomanifold,
    ValidationError,
    VertexCollision,
)


class Complex:
    """An abstract simplicial complex given by its facets."""

    __slots__ = ("facets", "_faces", "_edges")

    def __init__(self, facets: Iterable[Iterable[int]]):
        fs = {frozenset(f) for f in facets}
        if not fs:
            raise EmptyComplex("a complex needs at least one facet")
        for f in fs:
            if not f:
                raise ValidationError("empty facet")
            for v in f:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise ValidationError(f"vertex {v!r} is not an int")
                if v == 0:
                    raise ValidationError("vertex id 0 is reserved")
        self.facets = frozenset(
            f for f in fs if not any(f < g for g in fs)
        )
        self._faces = None
        self._edges = None

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(set().union(*self.facets)))

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.facets) - 1

    @property
    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) == 1

    def sorted_facets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(f)) for f in self.facets))

    @property
    def edges(self) -> frozenset[frozenset[int]]:
        if self._edges is None:
            es = set()
            for f in self.facets:
                es.update(map(frozenset, itertools.combinations(sorted(f), 2)))
            self._edges = frozenset(es)
        return self._edges

    def faces(self) -> frozenset[frozenset[int]]:
        """All nonempty faces."""
        if self._faces is None:
            out = set()
            for f in self.facets:
                sf = sorted(f)
                for k in range(1, len(sf) + 1):
                    out.update(map(frozenset, itertools.combinations(sf, k)))
            self._faces = frozenset(out)
        return self._faces

    def has_face(self, face: Iterable[int]) -> bool:
        face = frozenset(face)
        return any(face <= f for f in self.facets)

    def __eq__(self, other):
        return isinstance(other, Complex) and self.facets == other.facets

    def __hash__(self):
        return hash(self.facets)

    def __repr__(self):
        return f"Complex({list(self.sorted_facets())!r})"


def neighbors(c: Complex, v: int) -> tuple[int, ...]:
    out = set()
    for e in c.edges:
        if v in e:
            out.update(e - {v})
    return tuple(sorted(out))


def star(c: Complex, face: Iterable[int]) -> frozenset[frozenset[int]]:
    """Facets of the closed star of `face`."""
    face = frozenset(face)
    st = frozenset(f for f in c.facets if face <= f)
    if not st:
        raise FaceNotPresent(f"{sorted(face)} is not a face")
    return st


def link(c: Complex, face: Iterable[int]) -> Complex:
    face = frozenset(face)
    st = star(c, face)
    lk = {f - face for f in st}
    if lk == {frozenset()}:
        raise FaceNotPresent(f"{sorted(face)} is a facet; its link is void")
    return Complex(lk)


@dataclass(frozen=True)
class PseudomanifoldReport:
    pure: bool
    ridge_degree_ok: bool
    strongly_connected: bool
    witnesses: tuple = ()

    @property
    def ok(self) -> bool:
        return self.pure and self.ridge_degree_ok and self.strongly_connected


def _wall_table(c: Complex) -> dict[frozenset[int], list[frozenset[int]]]:
    table: dict[frozenset[int], list[frozenset[int]]] = {}
    for f in c.facets:
        for v in f:
            table.setdefault(f - {v}, []).append(f)
    return table


def is_pseudomanifold(c: Complex) -> PseudomanifoldReport:
    """Purity, ridge degree and strong connectivity, all reported."""
    pure = c.is_pure
    table = _wall_table(c)
    bad = sorted(
        (tuple(sorted(w)), len(fs)) for w, fs in table.items() if len(fs) != 2
    )
    ridge_ok = not bad

    # facet adjacency across shared walls
    facets = sorted(c.facets, key=lambda f: tuple(sorted(f)))
    index = {f: i for i, f in enumerate(facets)}
    seen = {0}
    stack = [facets[0]]
    while stack:
        f = stack.pop()
        for v in f:
            for g in table[f - {v}]:
                if index[g] not in seen:
                    seen.add(index[g])
                    stack.append(g)
    connected = len(seen) == len(facets)

    witnesses = tuple(bad[:4])
    return PseudomanifoldReport(pure, ridge_ok, connected, witnesses)


def walls(c: Complex) -> tuple[frozenset[int], ...]:
    """Codimension-one faces, sorted."""
    return tuple(
        sorted(_wall_table(c), key=lambda w: tuple(sorted(w)))
    )


@dataclass(frozen=True, order=True)
class WallCrossing:
    """A wall together with its two facets, ordered by off-wall vertex."""

    wall: tuple[int, ...]
    off_f: int
    off_g: int
    facet_f: tuple[int, ...] = field(compare=False)
    facet_g: tuple[int, ...] = field(compare=False)

    @property
    def wall_set(self) -> frozenset[int]:
        return frozenset(self.wall)


def wall_crossings(c: Complex) -> tuple[WallCrossing, ...]:
    table = _wall_table(c)
    out = []
    for w, fs in table.items():
        if len(fs) != 2:
            raise NotPseudomanifold(
                f"wall {sorted(w)} lies in {len(fs)} facets"
            )
        f, g = fs
        off_f = next(iter(f - w))
        off_g = next(iter(g - w))
        if off_g < off_f:
            f, g, off_f, off_g = g, f, off_g, off_f
        out.append(
            WallCrossing(
                wall=tuple(sorted(w)),
                off_f=off_f,
                off_g=off_g,
                facet_f=tuple(sorted(f)),
                facet_g=tuple(sorted(g)),
            )
        )
    return tuple(sorted(out))


def is_flag(c: Complex) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Whether every clique of the 1-skeleton is a face.

    Returns (flag, witness) where the witness is the lexicographically
    smallest minimal non-face, as a sorted vertex tuple.
    """
    verts = c.vertices
    adj = {v: set(neighbors(c, v)) for v in verts}
    # grow cliques a level at a time; at level k every (k-1)-clique is
    # already known to be a face, so any non-face k-clique is minimal
    level = sorted(tuple(sorted(e)) for e in c.edges)
    while level:
        nxt = []
        for cl in level:
            common = set(verts)
            for v in cl:
                common &= adj[v]
            for u in sorted(common):
                if u > cl[-1]:
                    nxt.append(cl + (u,))
        bad = sorted(t for t in nxt if not c.has_face(t))
        if bad:
            return False, bad[0]
        level = nxt
    return True, None


def link_condition(c: Complex, e: Iterable[int]) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Whether lk(a) ∩ lk(b) equals lk(ab) as sets of faces.

    The witness is a face of the intersection missing from the edge link.
    """
    a, b = sorted(e)
    if not c.has_face({a, b}):
        raise FaceNotPresent(f"{{{a},{b}}} is not an edge")
    both = link(c, [a]).faces() & link(c, [b]).faces()
    if frozenset((a, b)) in c.facets:
        of_edge = frozenset()  # the edge is a facet; its link is void
    else:
        of_edge = link(c, [a, b]).faces()
    extra = both - of_edge
    if not extra:
        return True, None
    return False, min(tuple(sorted(f)) for f in extra)


def subdivide_edge_abstract(c: Complex, e: Iterable[int], v: int) -> Complex:
    a, b = sorted(e)
    if not c.has_face({a, b}):
        raise FaceNotPresent(f"{{{a},{b}}} is not an edge")
    if v in c.vertices or v == 0:
        raise VertexCollision(f"vertex {v} already in use")
    out = []
    for f in c.facets:
        if a in f and b in f:
            out.append((f - {a}) | {v})
            out.append((f - {b}) | {v})
        else:
            out.append(f)
    return Complex(out)


def contract_edge_abstract(
    c: Complex, e: Iterable[int], w: int
) -> tuple[Complex, tuple]:
    """Identify both ends of `e` to the fresh vertex `w`.

    Facets containing the edge collapse and are dropped.  Returns the new
    complex and a tuple of warnings; a failed link condition and a broken
    pseudomanifold property are reported, not raised.
    """
    a, b = sorted(e)
    if not c.has_face({a, b}):
        raise FaceNotPresent(f"{{{a},{b}}} is not an edge")
    if w in c.vertices or w == 0:
        raise VertexCollision(f"vertex {w} already in use")
    warnings = []
    ok, witness = link_condition(c, (a, b))
    if not ok:
        warnings.append(("link_condition", witness))
    out = []
    for f in c.facets:
        if a in f and b in f:
            continue
        if a in f or b in f:
            out.append((f - {a, b}) | {w})
        else:
            out.append(f)
    res = Complex(out)
    rep = is_pseudomanifold(res)
    if not rep.ok:
        warnings.append(("not_pseudomanifold", rep.witnesses))
    return res, tuple(warnings)


def suspend_abstract(c: Complex, p: int, q: int) -> Complex:
    if p == q:
        raise ValidationError("suspension poles must be distinct")
    for u in (p, q):
        if u in c.vertices or u == 0:
            raise VertexCollision(f"vertex {u} already in use")
    out = []
    for f in c.facets:
        out.append(f | {p})
        out.append(f | {q})
    return Complex(out)


def induced_4cycles(c: Complex) -> tuple[tuple[int, int, int, int], ...]:
    """Induced 4-cycles of the 1-skeleton.

    Each cycle is reported as (p0, q0, p1, q1): p0 is the smallest vertex,
    p1 its opposite (the unique vertex of the cycle not adjacent to it) and
    q0 < q1 are the other two.
    """
    verts = c.vertices
    edges = c.edges
    out = []
    for quad in itertools.combinations(verts, 4):
        present = [
            frozenset(p) in edges for p in itertools.combinations(quad, 2)
        ]
        if sum(present) != 4:
            continue
        missing = [
            frozenset(p)
            for p in itertools.combinations(quad, 2)
            if frozenset(p) not in edges
        ]
        if missing[0] & missing[1]:
            continue
        p0 = quad[0]
        diag = next(iter(next(m for m in missing if p0 in m) - {p0}))
        q0, q1 = sorted(set(quad) - {p0, diag})
        out.append((p0, q0, diag, q1))
    return tuple(sorted(out))


def induced_5cycles(c: Complex) -> tuple[tuple[int, ...], ...]:
    """Induced 5-cycles, each starting at its smallest vertex and walking
    toward the smaller of that vertex's two cycle neighbours."""
    verts = c.vertices
    edges = c.edges
    out = []
    for quint in itertools.combinations(verts, 5):
        pairs = list(itertools.combinations(quint, 2))
        present = [p for p in pairs if frozenset(p) in edges]
        if len(present) != 5:
            continue
        deg = {v: 0 for v in quint}
        adj = {v: [] for v in quint}
        for x, y in present:
            deg[x] += 1
            deg[y] += 1
            adj[x].append(y)
            adj[y].append(x)
        if any(d != 2 for d in deg.values()):
            continue
        start = quint[0]
        walk = [start, min(adj[start])]
        while len(walk) < 5:
            nxt = [u for u in adj[walk[-1]] if u != walk[-2]]
            walk.append(nxt[0])
        if walk[-1] not in adj[start]:
            continue  # two components (triangle + pair can't occur, but be safe)
        out.append(tuple(walk))
    return tuple(sorted(out))


def four_cycle_cover(c: Complex) -> tuple[bool, Optional[tuple[int, int]]]:
    """Whether every edge lies on an induced 4-cycle."""
    covered = set()
    for p0, q0, p1, q1 in induced_4cycles(c):
        covered.add(frozenset((p0, q0)))
        covered.add(frozenset((q0, p1)))
        covered.add(frozenset((p1, q1)))
        covered.add(frozenset((q1, p0)))
    missing = sorted(
        tuple(sorted(e)) for e in c.edges if e not in covered
    )
    if missing:
        return False, missing[0]
    return True, None


@dataclass(frozen=True)
class Suspend:
    p: int
    q: int
    coords: Optional[tuple] = None


@dataclass(frozen=True)
class Subdivide:
    a: int
    b: int
    v: int
    eta: Optional[object] = None
    alpha: Optional[object] = None
    beta: Optional[object] = None
    coords: Optional[tuple] = None


@dataclass(frozen=True)
class Contract:
    a: int
    b: int
    w: int
    t: Optional[object] = None
    omega: Optional[object] = None
    coords: Optional[tuple] = None


Move = Suspend | Subdivide | Contract
