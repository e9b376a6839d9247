"""Deterministic random corpus of realized complexes for property sweeps.

Instances start from a cross-polytope boundary and apply short random
sequences of edge subdivisions (random rational parameter) and suspensions,
with the matching LSOP maintained step by step.  Everything is driven by a
seeded `random.Random`, so corpora are reproducible across runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .complex_core import link_condition
from .errors import FacetDegenerate
from .lsop import (
    Lsop,
    contract_lsop,
    exclusion_set,
    standard_cross_polytope_lsop,
    subdivide_lsop,
    suspend_lsop,
)
from .realization import (
    RealizedComplex,
    contract_edge,
    cross_polytope,
    subdivide_edge,
    suspend,
)


@dataclass(frozen=True)
class CorpusInstance:
    name: str
    base_dim: int
    rc: RealizedComplex
    lsop: Lsop


ETA_DENOMINATORS = (2, 3, 4, 5, 7)


def _random_eta(rng):
    q = rng.choice(ETA_DENOMINATORS)
    return Fraction(rng.randrange(1, q), q)


def _sorted_edges(rc):
    return sorted(tuple(sorted(e)) for e in rc.complex.edges)


def _build_one(name, d, rng, n_moves, max_suspensions):
    rc = cross_polytope(d)
    lsop = standard_cross_polytope_lsop(d)
    suspensions = 0
    for _ in range(n_moves):
        if suspensions < max_suspensions and rng.random() < 0.25:
            rc = suspend(rc)
            mv = rc.move_log[-1]
            lsop = suspend_lsop(lsop, mv.p, mv.q)
            suspensions += 1
        else:
            edge = rng.choice(_sorted_edges(rc))
            rc = subdivide_edge(rc, edge, eta=_random_eta(rng))
            mv = rc.move_log[-1]
            lsop = subdivide_lsop(lsop, mv.a, mv.b, mv.v)
    return CorpusInstance(name, d, rc, lsop)


def build_corpus(seed=174, count=54):
    """≥50 instances over base dimensions 3 and 4, move logs of length ≤4."""
    rng = random.Random(seed)
    out = []
    n4 = max(count // 4, 1) + 3  # keep the heavier dimension-4 share small
    for i in range(count):
        if i < count - n4:
            d, max_len, max_susp = 3, 4, 2
        else:
            d, max_len, max_susp = 4, 2, 1
        n_moves = rng.randrange(0, max_len + 1)
        out.append(_build_one(f"cp{d}-{i:02d}", d, rng, n_moves, max_susp))
    return tuple(out)


def extend_with_contraction(corpus, seed=175, count=12):
    """Derive instances whose final two moves are subdivide-then-contract.

    The contracted edge joins a subdivision endpoint to the fresh vertex;
    candidates are skipped unless the link condition holds, ω = 1/2 avoids
    the exclusion set, and the realized contraction stays nondegenerate.
    The instance LSOP is carried through both steps.
    """
    rng = random.Random(seed)
    out = []
    half = Fraction(1, 2)
    for inst in corpus:
        if len(out) >= count:
            break
        edges = _sorted_edges(inst.rc)
        rng.shuffle(edges)
        for edge in edges:
            try:
                rc2 = subdivide_edge(inst.rc, edge, eta=half)
            except FacetDegenerate:
                continue
            sub = rc2.move_log[-1]
            lsop2 = subdivide_lsop(inst.lsop, sub.a, sub.b, sub.v)
            con_edge = tuple(sorted((rng.choice(edge), sub.v)))
            ok, _ = link_condition(rc2.complex, con_edge)
            if not ok:
                continue
            excl = exclusion_set(lsop2, rc2.complex, *con_edge)
            if excl.always_bad or half in excl:
                continue
            try:
                rc3, warnings = contract_edge(rc2, con_edge, t=half, omega=half)
            except FacetDegenerate:
                continue
            if warnings:
                continue
            mv = rc3.move_log[-1]
            lsop3 = contract_lsop(lsop2, rc2.complex, mv.a, mv.b, mv.w, half)
            out.append(
                CorpusInstance(inst.name + "+c", inst.base_dim, rc3, lsop3)
            )
            break
    return tuple(out)
