"""Exact rational linear algebra over small dense systems.

Everything here works on tuples of Fraction.  Matrices are lists of row
tuples; a collection of points is usually passed as the *columns* of the
system it generates, so the helpers are explicit about which orientation
they expect.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegenerateCrossing,
    DegenerateSpan,
    KernelTooBig,
    NoKernel,
    RankDeficient,
)

Rat = Fraction
RatVec = tuple[Fraction, ...]


def vec(*xs) -> RatVec:
    return tuple(Fraction(x) for x in xs)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    assert len(u) == len(v)
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vadd(u: RatVec, v: RatVec) -> RatVec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: RatVec, v: RatVec) -> RatVec:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c: Fraction, u: Sequence[Fraction]) -> RatVec:
    c = Fraction(c)
    return tuple(c * a for a in u)


def is_zero(u: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in u)


def interpolate(x: RatVec, y: RatVec, t) -> RatVec:
    """(1-t)*x + t*y."""
    t = Fraction(t)
    return tuple((1 - t) * a + t * b for a, b in zip(x, y))


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def _int_row(r: Sequence[Fraction]) -> list[int]:
    nums: list[int] = []
    dens: list[int] = []
    lcm = 1
    for x in r:
        if not isinstance(x, Fraction):
            x = Fraction(x)
        nums.append(x.numerator)
        d = x.denominator
        dens.append(d)
        if d != 1:
            lcm = lcm * d // math.gcd(lcm, d)
    if lcm == 1:
        return _primitive(nums)
    return _primitive([n * (lcm // d) for n, d in zip(nums, dens)])


def _echelon(rows: Iterable[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Reduced row echelon form; pivots on the first nonzero of each row.

    Elimination runs on primitive integer rows (clearing denominators keeps
    the row space, hence the canonical form) and divides by the pivot only
    at the end.
    """
    mat = [_int_row(r) for r in rows]
    if not mat:
        return []
    ncols = len(mat[0])
    row = 0
    piv_cols: list[int] = []
    for col in range(ncols):
        piv = next((i for i in range(row, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        pr = mat[row]
        p = pr[col]
        for i in range(len(mat)):
            q = mat[i][col]
            if i != row and q:
                mat[i] = _primitive([p * x - q * y for x, y in zip(mat[i], pr)])
        piv_cols.append(col)
        row += 1
        if row == len(mat):
            break
    return [
        [Fraction(x, r[c]) for x in r] for r, c in zip(mat, piv_cols)
    ]


def rank(vectors: Iterable[Sequence[Fraction]]) -> int:
    # forward elimination only; nothing downstream needs the reduced rows
    mat = [_int_row(r) for r in vectors]
    if not mat:
        return 0
    ncols = len(mat[0])
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        pr = mat[row]
        p = pr[col]
        for i in range(row + 1, len(mat)):
            q = mat[i][col]
            if q:
                mat[i] = _primitive([p * x - q * y for x, y in zip(mat[i], pr)])
        row += 1
        if row == len(mat):
            break
    return row


def nullspace_line(vectors: Sequence[RatVec]) -> RatVec:
    """One-dimensional kernel of the matrix whose columns are `vectors`.

    Returns the unique kernel vector whose first nonzero entry equals 1.
    Raises NoKernel when the columns are independent and KernelTooBig when
    the kernel has dimension > 1.
    """
    n = len(vectors)
    if n == 0:
        raise NoKernel("no vectors")
    d = len(vectors[0])
    rows = [[vectors[j][i] for j in range(n)] for i in range(d)]
    ech = _echelon(rows)
    pivots = []
    for r in ech:
        pivots.append(next(j for j in range(n) if r[j] != 0))
    free = [j for j in range(n) if j not in pivots]
    if not free:
        raise NoKernel("columns are linearly independent")
    if len(free) > 1:
        raise KernelTooBig(f"kernel dimension {len(free)}")
    f = free[0]
    kern = [Fraction(0)] * n
    kern[f] = Fraction(1)
    for r, p in zip(ech, pivots):
        kern[p] = -r[f]
    lead = next(x for x in kern if x != 0)
    return tuple(x / lead for x in kern)


def perp_basis(vectors: Sequence[RatVec]) -> list[RatVec]:
    """Basis of the space of functionals vanishing on all of `vectors`."""
    if not vectors:
        raise DegenerateSpan("empty vector set")
    d = len(vectors[0])
    ech = _echelon(vectors)
    pivots = [next(j for j in range(d) if r[j] != 0) for r in ech]
    out = []
    for f in (j for j in range(d) if j not in pivots):
        phi = [Fraction(0)] * d
        phi[f] = Fraction(1)
        for r, p in zip(ech, pivots):
            phi[p] = -r[f]
        out.append(tuple(phi))
    return out


def hyperplane_normal(span_set: Sequence[RatVec]) -> RatVec:
    """Normal of the linear hyperplane spanned by `span_set`.

    The vectors must span a subspace of dimension exactly d-1; the returned
    normal has its first nonzero coordinate equal to 1.
    """
    if not span_set:
        raise DegenerateSpan("empty span set")
    d = len(span_set[0])
    ech = _echelon(span_set)
    if len(ech) != d - 1:
        raise DegenerateSpan(f"span has dimension {len(ech)}, expected {d - 1}")
    # kernel of the matrix whose rows are the spanning vectors
    pivots = [next(j for j in range(d) if r[j] != 0) for r in ech]
    free = [j for j in range(d) if j not in pivots]
    assert len(free) == 1
    f = free[0]
    normal = [Fraction(0)] * d
    normal[f] = Fraction(1)
    for r, p in zip(ech, pivots):
        normal[p] = -r[f]
    lead = next(x for x in normal if x != 0)
    return tuple(x / lead for x in normal)


class Separation(enum.Enum):
    SAME_SIDE = "same_side"
    OPPOSITE_SIDES = "opposite_sides"
    X_ON = "x_on"
    Y_ON = "y_on"
    BOTH_ON = "both_on"


def separation(span_set: Sequence[RatVec], x: RatVec, y: RatVec) -> Separation:
    """Position of x and y relative to the hyperplane spanned by span_set."""
    n = hyperplane_normal(span_set)
    a, b = dot(n, x), dot(n, y)
    if a == 0 and b == 0:
        return Separation.BOTH_ON
    if a == 0:
        return Separation.X_ON
    if b == 0:
        return Separation.Y_ON
    return Separation.SAME_SIDE if (a > 0) == (b > 0) else Separation.OPPOSITE_SIDES


class ConvexityClass(enum.Enum):
    STRICTLY_CONVEX = "strictly_convex"
    FLAT = "flat"
    STRICTLY_CONCAVE = "strictly_concave"


def linear_solve(columns: Sequence[RatVec], rhs: RatVec):
    """Solve sum_j t_j * columns[j] = rhs exactly.

    Returns ("unique", coefficients), ("none", None) or ("many", None).
    """
    n = len(columns)
    d = len(rhs)
    rows = [[columns[j][i] for j in range(n)] + [rhs[i]] for i in range(d)]
    ech = _echelon(rows)
    pivots = [next(j for j in range(n + 1) if r[j] != 0) for r in ech]
    if any(p == n for p in pivots):
        return "none", None
    if len(pivots) < n:
        return "many", None
    sol = [Fraction(0)] * n
    for r, p in zip(ech, pivots):
        sol[p] = r[n]
    return "unique", tuple(sol)


def span_key(vectors: Iterable[RatVec]) -> tuple:
    """Canonical key identifying the linear span of `vectors`.

    Two collections get equal keys iff they span the same subspace.
    """
    return tuple(tuple(r) for r in _echelon(vectors))
