"""JSON persistence ("pl-convex/1") and the command-line interface.

Rationals travel as strings ("p" or "p/q", reduced, sign on the numerator);
JSON numbers in coordinate position are rejected so nothing ever round-trips
through floating point.  Serialization is canonical — vertices sorted by id,
facets lexicographically, fixed key order — so equal documents are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import analysis
from .contraction_space import contraction_space
from .complex_core import (
    Complex,
    Contract,
    Move,
    Subdivide,
    Suspend,
    induced_4cycles,
    is_flag,
    is_pseudomanifold,
)
from .errors import ParseError, PlConvexError, ValidationError
from .lsop import (
    Lsop,
    choose_generic_omega,
    contract_lsop,
    default_seed,
    is_lsop,
    lsop_wall_classification,
    realize_from_lsop,
    standard_cross_polytope_lsop,
    subdivide_lsop,
    suspend_lsop,
    trace_coefficients,
)
from .realization import (
    Realization,
    RealizedComplex,
    audit,
    contract_edge,
    cross_polytope,
    fresh_vertex,
    hexagon,
    subdivide_edge,
    suspend,
)

SCHEMA = "pl-convex/1"

_RAT_RE = re.compile(r"^-?\d+(/\d+)?$")


def _rat_from_str(s, where):
    if not isinstance(s, str):
        raise ParseError(f"{where}: rationals must be strings, got {s!r}")
    if not _RAT_RE.match(s):
        raise ParseError(f"{where}: {s!r} is not a rational 'p' or 'p/q'")
    return Fraction(s)


def _rat_str(x) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class Document:
    """Persisted realized complex with optional LSOP and move log.

    `extra` holds unknown top-level fields kept in lax mode; strict mode
    rejects them outright.
    """

    ambient_dim: int
    vertices: tuple  # ((id, coords), ...) sorted by id
    facets: tuple  # sorted id-tuples
    lsop: Optional[Lsop] = None
    move_log: tuple = ()
    meta: tuple = ()  # ((key, value), ...) sorted
    extra: tuple = ()

    def to_realized(self) -> RealizedComplex:
        return RealizedComplex(
            complex=Complex(self.facets),
            realization=Realization(self.ambient_dim, dict(self.vertices)),
            move_log=self.move_log,
        )


def from_realized(rc: RealizedComplex, lsop=None, meta=()) -> Document:
    coords = rc.realization.coords
    return Document(
        ambient_dim=rc.ambient_dim,
        vertices=tuple((v, tuple(coords[v])) for v in sorted(coords)),
        facets=rc.complex.sorted_facets(),
        lsop=lsop,
        move_log=tuple(rc.move_log),
        meta=tuple(sorted(meta)) if meta else (),
    )


_MOVE_FIELDS = {
    "suspend": ("p", "q"),
    "subdivide": ("a", "b", "v"),
    "contract": ("a", "b", "w"),
}
_MOVE_RATS = {
    "suspend": (),
    "subdivide": ("eta", "alpha", "beta"),
    "contract": ("t", "omega"),
}


def _move_to_json(m: Move):
    if isinstance(m, Suspend):
        kind = "suspend"
    elif isinstance(m, Subdivide):
        kind = "subdivide"
    elif isinstance(m, Contract):
        kind = "contract"
    else:
        raise ValidationError(f"unknown move record {m!r}")
    out = {"kind": kind}
    for f in _MOVE_FIELDS[kind]:
        out[f] = getattr(m, f)
    for f in _MOVE_RATS[kind]:
        val = getattr(m, f)
        if val is not None:
            out[f] = _rat_str(val)
    if m.coords is not None:
        out["coords"] = [_rat_str(x) for x in m.coords]
    return out


def _move_from_json(obj, where, strict):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError(f"{where}: move records need a 'kind'")
    kind = obj["kind"]
    if kind not in _MOVE_FIELDS:
        raise ParseError(f"{where}: unknown move kind {kind!r}")
    known = {"kind", "coords", *_MOVE_FIELDS[kind], *_MOVE_RATS[kind]}
    if strict:
        for k in obj:
            if k not in known:
                raise ParseError(f"{where}: unknown field {k!r}")
    kwargs = {}
    for f in _MOVE_FIELDS[kind]:
        if f not in obj or not isinstance(obj[f], int):
            raise ParseError(f"{where}: field {f!r} must be a vertex id")
        kwargs[f] = obj[f]
    for f in _MOVE_RATS[kind]:
        if obj.get(f) is not None:
            kwargs[f] = _rat_from_str(obj[f], f"{where}.{f}")
    if obj.get("coords") is not None:
        coords = obj["coords"]
        if not isinstance(coords, list):
            raise ParseError(f"{where}: coords must be a list")
        kwargs["coords"] = tuple(
            _rat_from_str(x, f"{where}.coords") for x in coords
        )
    cls = {"suspend": Suspend, "subdivide": Subdivide, "contract": Contract}[kind]
    return cls(**kwargs)


_TOP_FIELDS = ("schema", "ambient_dim", "vertices", "facets", "lsop", "move_log", "meta")


def parse(data: bytes, strict: bool = True) -> Document:
    """Decode and validate a pl-convex/1 document."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    try:
        obj = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as e:
        raise ParseError(f"not UTF-8: {e}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object")
    if obj.get("schema") != SCHEMA:
        raise ParseError(f"schema must be {SCHEMA!r}, got {obj.get('schema')!r}")
    extra = []
    for k in obj:
        if k not in _TOP_FIELDS:
            if strict:
                raise ParseError(f"unknown field {k!r}")
            extra.append((k, json.dumps(obj[k], sort_keys=True)))

    dim = obj.get("ambient_dim")
    if not isinstance(dim, int) or dim < 1:
        raise ParseError("ambient_dim must be a positive integer")

    vertices = []
    seen = set()
    for i, entry in enumerate(obj.get("vertices", [])):
        where = f"vertices[{i}]"
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), int):
            raise ParseError(f"{where}: need an integer 'id'")
        if strict:
            for k in entry:
                if k not in ("id", "coords"):
                    raise ParseError(f"{where}: unknown field {k!r}")
        vid = entry["id"]
        if vid in seen:
            raise ValidationError(f"duplicate vertex id {vid}")
        seen.add(vid)
        coords = entry.get("coords")
        if not isinstance(coords, list) or len(coords) != dim:
            raise ParseError(f"{where}: coords must be a list of {dim} rationals")
        vertices.append(
            (vid, tuple(_rat_from_str(x, f"{where}.coords") for x in coords))
        )
    vertices.sort()

    facets = []
    for i, f in enumerate(obj.get("facets", [])):
        if not isinstance(f, list) or not all(isinstance(v, int) for v in f):
            raise ParseError(f"facets[{i}]: must be a list of vertex ids")
        for v in f:
            if v not in seen:
                raise ValidationError(f"facets[{i}]: unknown vertex {v}")
        facets.append(tuple(sorted(f)))
    facets.sort()

    lsop = None
    if obj.get("lsop") is not None:
        lobj = obj["lsop"]
        if not isinstance(lobj, dict) or "rows" not in lobj:
            raise ParseError("lsop: need 'rows'")
        if strict:
            for k in lobj:
                if k != "rows":
                    raise ParseError(f"lsop: unknown field {k!r}")
        vs = sorted(seen)
        index = {v: i for i, v in enumerate(vs)}
        rows = []
        for i, row in enumerate(lobj["rows"]):
            dense = [Fraction(0)] * len(vs)
            if not isinstance(row, list):
                raise ParseError(f"lsop.rows[{i}]: must be a list")
            for ent in row:
                if not isinstance(ent, dict) or not isinstance(
                    ent.get("vertex"), int
                ):
                    raise ParseError(f"lsop.rows[{i}]: entries need a 'vertex'")
                if ent["vertex"] not in index:
                    raise ValidationError(
                        f"lsop.rows[{i}]: unknown vertex {ent['vertex']}"
                    )
                dense[index[ent["vertex"]]] = _rat_from_str(
                    ent.get("coeff"), f"lsop.rows[{i}].coeff"
                )
            rows.append(tuple(dense))
        lsop = Lsop(vertices=tuple(vs), rows=tuple(rows))

    move_log = tuple(
        _move_from_json(m, f"move_log[{i}]", strict)
        for i, m in enumerate(obj.get("move_log", []))
    )

    meta_obj = obj.get("meta", {})
    if not isinstance(meta_obj, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in meta_obj.items()
    ):
        raise ParseError("meta: must map strings to strings")

    doc = Document(
        ambient_dim=dim,
        vertices=tuple(vertices),
        facets=tuple(facets),
        lsop=lsop,
        move_log=move_log,
        meta=tuple(sorted(meta_obj.items())),
        extra=tuple(sorted(extra)),
    )
    doc.to_realized()  # validates facet/coordinate consistency
    return doc


def serialize(doc: Document) -> bytes:
    obj = {
        "schema": SCHEMA,
        "ambient_dim": doc.ambient_dim,
        "vertices": [
            {"id": v, "coords": [_rat_str(x) for x in coords]}
            for v, coords in sorted(doc.vertices)
        ],
        "facets": [list(f) for f in sorted(tuple(sorted(f)) for f in doc.facets)],
    }
    if doc.lsop is not None:
        obj["lsop"] = {
            "rows": [
                [
                    {"vertex": v, "coeff": _rat_str(x)}
                    for v, x in zip(doc.lsop.vertices, row)
                    if x != 0
                ]
                for row in doc.lsop.rows
            ]
        }
    if doc.move_log:
        obj["move_log"] = [_move_to_json(m) for m in doc.move_log]
    if doc.meta:
        obj["meta"] = dict(doc.meta)
    for k, raw in doc.extra:
        obj[k] = json.loads(raw)
    return (json.dumps(obj, indent=2) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# report rendering

def _jsonable(x):
    if isinstance(x, Fraction):
        return _rat_str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return [_jsonable(v) for v in sorted(x)]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return str(x)


def _print_table(obj, out, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                out.write(f"{pad}{k}:\n")
                _print_table(v, out, indent + 1)
            else:
                out.write(f"{pad}{k}: {_scalar(v)}\n")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)):
                out.write(f"{pad}- [{i}]\n")
                _print_table(v, out, indent + 1)
            else:
                out.write(f"{pad}- {_scalar(v)}\n")
    else:
        out.write(f"{pad}{_scalar(obj)}\n")


def _scalar(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[]"
    return str(v)


def _emit(report, fmt, out=None):
    out = out or sys.stdout
    report = _jsonable(report)
    if fmt == "table":
        _print_table(report, out)
    else:
        out.write(json.dumps(report, indent=2) + "\n")


# ---------------------------------------------------------------------------
# CLI helpers

def _read_doc(path) -> Document:
    data = sys.stdin.buffer.read() if path == "-" else open(path, "rb").read()
    return parse(data)


def _write_doc(doc: Document, path):
    data = serialize(doc)
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _edge(text):
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"expected an edge 'A,B', got {text!r}") from None
    return (a, b)


def _parse_seed(spec, rc) -> dict:
    """Seed SPEC: 'default' or 'id=c1,c2,...;id=...' with rational entries."""
    if spec is None or spec == "default":
        return default_seed(rc)
    seed = {}
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ParseError(f"seed entry {part!r} must look like 'id=c1,c2,...'")
        vid, coords = part.split("=", 1)
        seed[int(vid)] = tuple(
            _rat_from_str(x.strip(), "seed") for x in coords.split(",")
        )
    return seed


def _class_name(cl) -> str:
    return {
        "STRICTLY_CONVEX": "StrictlyConvex",
        "FLAT": "Flat",
        "STRICTLY_CONCAVE": "StrictlyConcave",
    }[cl.name]


def _crossing_report(rep):
    return {
        "wall": list(rep.crossing.wall),
        "off_wall": [rep.crossing.off_f, rep.crossing.off_g],
        "coefficients": {
            str(v): _rat_str(c) for v, c in sorted(rep.relation.coeffs.items())
        },
        "classes": {str(v): _class_name(c) for v, c in sorted(rep.classes.items())},
    }


def _interval_report(res):
    body = {
        "status": res.status.value,
        "union_convex": res.union_convex,
    }
    if res.union_report.witness is not None:
        w_wall, w_vertex = res.union_report.witness
        body["witness"] = {"wall": list(w_wall), "vertex": w_vertex}
    if not res.interval.empty and res.status.value != "empty":
        body["interval"] = {
            "lo": _rat_str(res.interval.t_lo),
            "hi": _rat_str(res.interval.t_hi),
            "lo_tight": res.interval.lo_tight,
            "hi_tight": res.interval.hi_tight,
        }
    if res.failure_reason:
        body["failure_reason"] = res.failure_reason
    return body


# ---------------------------------------------------------------------------
# subcommands

def _cmd_gen(args):
    if args.shape == "cross-polytope":
        rc = cross_polytope(args.dim)
        lsop = standard_cross_polytope_lsop(args.dim)
    else:
        rc = hexagon()
        lsop = None
    _write_doc(from_realized(rc, lsop=lsop), args.output)
    return 0


def _cmd_check(args):
    doc = _read_doc(args.file)
    rc = doc.to_realized()
    pm = is_pseudomanifold(rc.complex)
    flag_ok, flag_witness = is_flag(rc.complex)
    report = {
        "pseudomanifold": {
            "ok": pm.ok,
            "pure": pm.pure,
            "ridge_degree_ok": pm.ridge_degree_ok,
            "strongly_connected": pm.strongly_connected,
            "witnesses": [list(w) for w, _ in pm.witnesses],
        },
        "flag": {"ok": flag_ok, "witness": list(flag_witness) if flag_witness else None},
    }
    convex_ok = None
    if pm.ok:
        rep = audit(rc)
        convex_ok = rep.all_crossings_convex
        report["convex"] = {
            "ok": rep.all_crossings_convex,
            "flat_pairs": [
                {"wall": list(w), "vertex": m} for w, m in rep.flat_pairs
            ],
            "crossings": [_crossing_report(r) for r in rep.crossings],
        }
    _emit(report, args.report)
    if args.check_assert:
        ok = {
            "pseudomanifold": pm.ok,
            "flag": flag_ok,
            "convex": bool(convex_ok),
        }[args.check_assert]
        return 0 if ok else 1
    return 0


def _cmd_move(args):
    doc = _read_doc(args.file)
    rc = doc.to_realized()
    lsop = doc.lsop
    if args.kind == "subdivide":
        rc2 = subdivide_edge(rc, _edge(args.edge), eta=args.eta)
        mv = rc2.move_log[-1]
        if lsop is not None:
            lsop = subdivide_lsop(lsop, mv.a, mv.b, mv.v)
    elif args.kind == "contract":
        a, b = sorted(_edge(args.edge))
        omega = args.omega
        if lsop is not None and omega is None:
            # pick the replacement weight up front so the log records it
            omega = choose_generic_omega(lsop, rc.complex, a, b, target=args.t)
        rc2, warnings = contract_edge(rc, (a, b), t=args.t, omega=omega)
        mv = rc2.move_log[-1]
        if warnings:
            for w in warnings:
                sys.stderr.write(f"warning: {w[0]} at {w[1]}\n")
        if lsop is not None:
            lsop = contract_lsop(lsop, rc.complex, mv.a, mv.b, mv.w, omega)
    else:
        rc2 = suspend(rc)
        mv = rc2.move_log[-1]
        if lsop is not None:
            lsop = suspend_lsop(lsop, mv.p, mv.q)
    _write_doc(from_realized(rc2, lsop=lsop, meta=doc.meta), args.output)
    return 0


def _cmd_cspace(args):
    doc = _read_doc(args.file)
    res = contraction_space(doc.to_realized(), _edge(args.edge))
    body = {"edge": list(_edge(args.edge))}
    body.update(_interval_report(res))
    body["constraints"] = [
        {
            "kind": cr.constraint.provenance.kind,
            "sense": cr.constraint.sense,
            "normal": [_rat_str(x) for x in cr.constraint.normal],
            "segment_redundant": cr.constraint.provenance.segment_redundant,
            "interval": None
            if cr.interval.empty
            else [_rat_str(cr.interval.t_lo), _rat_str(cr.interval.t_hi)],
        }
        for cr in res.constraints
    ]
    _emit(body, args.report)
    return 0


def _cmd_lsop(args):
    doc = _read_doc(args.file)
    rc = doc.to_realized()
    if doc.lsop is None and args.action != "trace":
        raise ValidationError("document has no lsop")
    if args.action == "check":
        ok, facet = is_lsop(rc.complex, doc.lsop)
        _emit({"ok": ok, "failing_facet": list(facet) if facet else None}, args.report)
        return 0
    if args.action == "realize":
        seed = _parse_seed(args.seed, rc)
        real = realize_from_lsop(doc.lsop, rc.complex, seed)
        out = RealizedComplex(rc.complex, real, rc.move_log)
        _write_doc(from_realized(out, lsop=doc.lsop, meta=doc.meta), args.output)
        return 0
    if args.action == "wallclass":
        wall = tuple(int(x) for x in args.wall.split(","))
        seed = _parse_seed(args.seed, rc)
        rep = lsop_wall_classification(rc.complex, doc.lsop, wall, seed)
        _emit(
            {
                "wall": list(rep.wall),
                "seed": {str(v): [_rat_str(x) for x in xs] for v, xs in sorted(rep.seed.items())},
                "coefficients": {
                    str(v): _rat_str(c) for v, c in sorted(rep.relation.coeffs.items())
                },
                "classes": {str(v): _class_name(c) for v, c in sorted(rep.classes.items())},
            },
            args.report,
        )
        return 0
    # trace: replay the move log from the standard cross-polytope base
    base_vertices = set(rc.complex.vertices)
    for mv in reversed(rc.move_log):
        if isinstance(mv, Suspend):
            base_vertices -= {mv.p, mv.q}
        elif isinstance(mv, Subdivide):
            base_vertices.discard(mv.v)
        elif isinstance(mv, Contract):
            base_vertices.discard(mv.w)
            base_vertices |= {mv.a, mv.b}
    d = max(abs(v) for v in base_vertices) if base_vertices else 0
    if base_vertices != {s * i for i in range(1, d + 1) for s in (1, -1)}:
        raise ValidationError(
            "trace requires a move log starting from a cross-polytope base"
        )
    trace = trace_coefficients(rc.move_log, standard_cross_polytope_lsop(d))
    _emit(
        {
            "nrows": trace.nrows,
            "columns": {
                str(v): {
                    "entries": [
                        {
                            "kind": ev.kind,
                            "vertex": ev.vertex,
                            "move_index": ev.move_index,
                            "weight": _rat_str(wt),
                        }
                        for ev, wt in trace.entries[v]
                    ],
                    "column": [_rat_str(x) for x in trace.columns[v]],
                }
                for v in sorted(trace.columns)
            },
        },
        args.report,
    )
    return 0


def _cmd_analyze(args):
    doc = _read_doc(args.file)
    rc = doc.to_realized()
    if args.what == "4cycles":
        _emit({"cycles": [list(c) for c in induced_4cycles(rc.complex)]}, args.report)
        return 0
    if args.what == "flat":
        rep = audit(rc)
        _emit(
            {
                "all_crossings_convex": rep.all_crossings_convex,
                "flat_pairs": [{"wall": list(w), "vertex": m} for w, m in rep.flat_pairs],
            },
            args.report,
        )
        return 0
    if args.what == "span-classes":
        rep = analysis.wall_span_classes(rc, args.vertex)
        body = {"applicable": rep.applicable}
        if rep.reason:
            body["reason"] = rep.reason
        body["classes"] = [
            {
                "walls": [list(w) for w in cl.walls],
                "strongly_connected": cl.strongly_connected,
                "all_flat_wrt_vertex": cl.all_flat_wrt_r,
            }
            for cl in rep.classes
        ]
        _emit(body, args.report)
        return 0
    if args.what == "move-diff":
        move = _move_from_args(args, rc)
        diff = analysis.move_diff(
            rc, move, observed_edge=_edge(args.observed) if args.observed else None
        )
        body = {
            "new_4cycles": [list(c) for c in diff.new_4cycles],
            "lost_4cycles": [list(c) for c in diff.lost_4cycles],
            "new_flat_pairs": [
                {"wall": list(w), "vertex": m} for w, m in diff.new_flat_pairs
            ],
            "lost_flat_pairs": [
                {"wall": list(w), "vertex": m} for w, m in diff.lost_flat_pairs
            ],
        }
        if diff.cspace_before is not None:
            body["cspace_before"] = _interval_report(diff.cspace_before)
        if diff.cspace_after is not None:
            body["cspace_after"] = _interval_report(diff.cspace_after)
        _emit(body, args.report)
        return 0
    if args.what == "subdiv-effect":
        rep = analysis.subdivision_effect_cases(
            rc, _edge(args.edge), _edge(args.subdivide), eta=args.eta
        )
        _emit(
            {
                "case": rep.case,
                "expectation": rep.expectation,
                "expectation_ok": rep.expectation_ok,
                "before": _interval_report(rep.cspace_before),
                "after": _interval_report(rep.cspace_after),
            },
            args.report,
        )
        return 0
    # ext-contract-effect
    rep = analysis.external_contraction_effect(
        rc, _edge(args.edge), _edge(args.contract), args.omega
    )
    body = {
        "case": rep.case,
        "before": _interval_report(rep.cspace_before),
        "equality_expected": rep.equality_expected,
        "equality_ok": rep.equality_ok,
        "entries": [
            {
                "facet": list(en.facet),
                "partner_vertex": en.partner_vertex,
                "ref_vertex": en.ref_vertex,
                "c_z": _rat_str(en.c_z),
                "eta_before": _rat_str(en.eta_before),
                "eta_after": None if en.eta_after is None else _rat_str(en.eta_after),
                "threshold": _rat_str(en.threshold),
                "persists": en.persists,
                "moved_toward": en.moved_toward,
            }
            for en in rep.entries
        ],
    }
    if rep.cspace_after is not None:
        body["after"] = _interval_report(rep.cspace_after)
    _emit(body, args.report)
    return 0


def _move_from_args(args, rc):
    if args.move == "suspend":
        p = fresh_vertex(rc.complex)
        return Suspend(p=p, q=-p)
    if not args.edge:
        raise ParseError(f"move-diff {args.move} requires --edge")
    a, b = sorted(_edge(args.edge))
    if args.move == "subdivide":
        return Subdivide(a=a, b=b, v=fresh_vertex(rc.complex), eta=args.eta)
    return Contract(a=a, b=b, w=fresh_vertex(rc.complex), t=args.t)


def _rat_arg(text):
    try:
        return _rat_from_str(text, "argument")
    except ParseError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="plconvex")
    top.add_argument("--report", choices=("json", "table"), default="json")
    # leaf parsers accept --report too (SUPPRESS keeps them from clobbering
    # a value given before the subcommand)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--report", choices=("json", "table"), default=argparse.SUPPRESS
    )
    sub = top.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a built-in realized complex")
    gen_sub = gen.add_subparsers(dest="shape", required=True)
    gcp = gen_sub.add_parser("cross-polytope", parents=[common])
    gcp.add_argument("--dim", type=int, required=True)
    gcp.add_argument("-o", "--output", default=None)
    ghex = gen_sub.add_parser("hexagon", parents=[common])
    ghex.add_argument("-o", "--output", default=None)
    gen.set_defaults(func=_cmd_gen)

    chk = sub.add_parser(
        "check",
        parents=[common],
        help="pseudomanifold / flag / convexity report",
    )
    chk.add_argument("file")
    chk.add_argument(
        "--assert",
        dest="check_assert",
        choices=("pseudomanifold", "flag", "convex"),
        default=None,
    )
    chk.set_defaults(func=_cmd_check)

    mv = sub.add_parser("move", help="apply a PL move and emit the new document")
    mv_sub = mv.add_subparsers(dest="kind", required=True)
    ms = mv_sub.add_parser("subdivide", parents=[common])
    ms.add_argument("--edge", required=True)
    ms.add_argument("--eta", type=_rat_arg, default=Fraction(1, 2))
    ms.add_argument("file")
    ms.add_argument("-o", "--output", default=None)
    mc = mv_sub.add_parser("contract", parents=[common])
    mc.add_argument("--edge", required=True)
    mc.add_argument("--t", type=_rat_arg, default=Fraction(1, 2))
    mc.add_argument("--omega", type=_rat_arg, default=None)
    mc.add_argument("file")
    mc.add_argument("-o", "--output", default=None)
    mp = mv_sub.add_parser("suspend", parents=[common])
    mp.add_argument("file")
    mp.add_argument("-o", "--output", default=None)
    mv.set_defaults(func=_cmd_move)

    cs = sub.add_parser(
        "cspace", parents=[common], help="contraction point space of an edge"
    )
    cs.add_argument("--edge", required=True)
    cs.add_argument("file")
    cs.set_defaults(func=_cmd_cspace)

    ls = sub.add_parser("lsop", help="linear-system-of-parameters operations")
    ls_sub = ls.add_subparsers(dest="action", required=True)
    lc = ls_sub.add_parser("check", parents=[common])
    lc.add_argument("file")
    lr = ls_sub.add_parser("realize", parents=[common])
    lr.add_argument("--seed", default=None)
    lr.add_argument("file")
    lr.add_argument("-o", "--output", default=None)
    lt = ls_sub.add_parser("trace", parents=[common])
    lt.add_argument("file")
    lw = ls_sub.add_parser("wallclass", parents=[common])
    lw.add_argument("--wall", required=True)
    lw.add_argument("--seed", default=None)
    lw.add_argument("file")
    ls.set_defaults(func=_cmd_lsop)

    an = sub.add_parser("analyze", help="structural diagnostics")
    an_sub = an.add_subparsers(dest="what", required=True)
    a4 = an_sub.add_parser("4cycles", parents=[common])
    a4.add_argument("file")
    af = an_sub.add_parser("flat", parents=[common])
    af.add_argument("file")
    asp = an_sub.add_parser("span-classes", parents=[common])
    asp.add_argument("--vertex", type=int, required=True)
    asp.add_argument("file")
    amd = an_sub.add_parser("move-diff", parents=[common])
    amd.add_argument(
        "--move", choices=("suspend", "subdivide", "contract"), required=True
    )
    amd.add_argument("--edge", default=None)
    amd.add_argument("--eta", type=_rat_arg, default=Fraction(1, 2))
    amd.add_argument("--t", type=_rat_arg, default=Fraction(1, 2))
    amd.add_argument("--observed", default=None)
    amd.add_argument("file")
    ase = an_sub.add_parser("subdiv-effect", parents=[common])
    ase.add_argument("--edge", required=True)
    ase.add_argument("--subdivide", required=True)
    ase.add_argument("--eta", type=_rat_arg, default=Fraction(1, 2))
    ase.add_argument("file")
    aec = an_sub.add_parser("ext-contract-effect", parents=[common])
    aec.add_argument("--edge", required=True)
    aec.add_argument("--contract", required=True)
    aec.add_argument("--omega", type=_rat_arg, default=Fraction(1, 2))
    aec.add_argument("file")
    an.set_defaults(func=_cmd_analyze)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except PlConvexError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
