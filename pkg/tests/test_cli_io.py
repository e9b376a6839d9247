"""Document round-trips and the command-line surface.

Serialization is canonical: parse(serialize(doc)) must reproduce the bytes
exactly, rationals travel as strings, and unknown fields are either rejected
(strict) or preserved verbatim (lax).
"""

import json
import subprocess
from fractions import Fraction as F

import pytest

from plconvex import (
    Document,
    ParseError,
    ValidationError,
    from_realized,
    parse,
    serialize,
)
from plconvex.cli_io import main
from plconvex.lsop import standard_cross_polytope_lsop
from plconvex.realization import (
    contract_edge,
    cross_polytope,
    hexagon,
    subdivide_edge,
    suspend,
)


def moved_fixture():
    rc = subdivide_edge(cross_polytope(3), (1, 2), eta=F(1, 3))
    rc = suspend(rc, 5, -5)
    rc, _ = contract_edge(rc, (-1, -2), t=F(2, 7))
    return rc


# ---------------------------------------------------------------------------
# parse / serialize


def test_serialize_parse_roundtrip_is_byte_identical():
    doc = from_realized(
        cross_polytope(3), lsop=standard_cross_polytope_lsop(3), meta=(("note", "x"),)
    )
    data = serialize(doc)
    again = serialize(parse(data))
    assert data == again
    assert data.endswith(b"\n")


def test_move_log_roundtrip_keeps_exact_weights():
    doc = from_realized(moved_fixture())
    doc2 = parse(serialize(doc))
    assert doc2.move_log == doc.move_log
    kinds = [type(m).__name__ for m in doc2.move_log]
    assert kinds == ["Subdivide", "Suspend", "Contract"]
    assert doc2.move_log[0].eta == F(1, 3)
    assert doc2.move_log[2].t == F(2, 7)


def test_rationals_must_be_strings():
    doc = json.loads(serialize(from_realized(cross_polytope(2))))
    doc["vertices"][0]["coords"][0] = 1.0
    with pytest.raises(ParseError):
        parse(json.dumps(doc).encode())


def test_malformed_json_reports_position():
    with pytest.raises(ParseError) as exc:
        parse(b'{"schema": "pl-convex/1",')
    assert "line" in str(exc.value)


def test_schema_tag_is_checked():
    doc = json.loads(serialize(from_realized(cross_polytope(2))))
    doc["schema"] = "pl-convex/2"
    with pytest.raises(ParseError):
        parse(json.dumps(doc).encode())


def test_strict_rejects_unknown_fields_lax_preserves_them():
    raw = json.loads(serialize(from_realized(cross_polytope(2))))
    raw["custom"] = {"a": [1, 2]}
    data = json.dumps(raw).encode()
    with pytest.raises(ParseError):
        parse(data)
    doc = parse(data, strict=False)
    assert dict(doc.extra)["custom"] == json.dumps({"a": [1, 2]}, sort_keys=True)
    assert b'"custom"' in serialize(doc)


def test_duplicate_vertices_and_unknown_facet_vertices_are_rejected():
    raw = json.loads(serialize(from_realized(cross_polytope(2))))
    dup = dict(raw)
    dup["vertices"] = raw["vertices"] + [raw["vertices"][0]]
    with pytest.raises(ValidationError):
        parse(json.dumps(dup).encode())
    bad = json.loads(serialize(from_realized(cross_polytope(2))))
    bad["facets"][0][0] = 99
    with pytest.raises(ValidationError):
        parse(json.dumps(bad).encode())


def test_lsop_rows_are_sparse_and_skip_zeros():
    doc = from_realized(cross_polytope(2), lsop=standard_cross_polytope_lsop(2))
    raw = json.loads(serialize(doc))
    first = raw["lsop"]["rows"][0]
    assert {e["vertex"] for e in first} == {-1, 1}  # zero entries dropped
    assert parse(serialize(doc)).lsop.columns() == doc.lsop.columns()


def test_document_facets_are_canonically_sorted():
    doc = from_realized(hexagon())
    raw = json.loads(serialize(doc))
    assert raw["facets"] == sorted(raw["facets"])
    assert all(f == sorted(f) for f in raw["facets"])


# ---------------------------------------------------------------------------
# CLI


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_cli_gen_and_check(tmp_path, capsys):
    path = tmp_path / "oct.json"
    code, _ = run(capsys, "gen", "cross-polytope", "--dim", "3", "-o", str(path))
    assert code == 0
    doc = parse(path.read_bytes())
    assert len(doc.facets) == 8
    assert doc.lsop is not None

    code, rep = run_json(capsys, "check", str(path), "--assert", "convex")
    assert code == 0
    assert rep["pseudomanifold"]["ok"] and rep["flag"]["ok"] and rep["convex"]["ok"]


def test_cli_check_assert_failure_exits_one(tmp_path, capsys):
    raw = json.loads(serialize(from_realized(cross_polytope(3))))
    raw["facets"] = raw["facets"][:-1]  # open up one wall
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(raw))
    code, rep = run_json(capsys, "check", str(path), "--assert", "pseudomanifold")
    assert code == 1
    assert not rep["pseudomanifold"]["ok"]
    assert rep["pseudomanifold"]["witnesses"]


def test_cli_move_pipeline_carries_the_lsop(tmp_path, capsys):
    oct_path = tmp_path / "oct.json"
    sub_path = tmp_path / "sub.json"
    con_path = tmp_path / "con.json"
    sus_path = tmp_path / "sus.json"
    assert run(capsys, "gen", "cross-polytope", "--dim", "3", "-o", str(oct_path))[0] == 0
    assert (
        run(
            capsys,
            "move",
            "subdivide",
            "--edge",
            "1,2",
            "--eta",
            "1/2",
            str(oct_path),
            "-o",
            str(sub_path),
        )[0]
        == 0
    )
    doc = parse(sub_path.read_bytes())
    assert doc.move_log[-1].v == 4 and doc.move_log[-1].eta == F(1, 2)

    code, rep = run_json(capsys, "lsop", "check", str(sub_path))
    assert code == 0 and rep["ok"]

    assert (
        run(capsys, "move", "contract", "--edge", "1,4", str(sub_path), "-o", str(con_path))[0]
        == 0
    )
    doc2 = parse(con_path.read_bytes())
    assert doc2.move_log[-1].w == 5
    assert doc2.move_log[-1].omega is not None
    code, rep = run_json(capsys, "lsop", "check", str(con_path))
    assert code == 0 and rep["ok"]

    assert run(capsys, "move", "suspend", str(con_path), "-o", str(sus_path))[0] == 0
    doc3 = parse(sus_path.read_bytes())
    assert doc3.ambient_dim == 4
    code, rep = run_json(capsys, "lsop", "check", str(sus_path))
    assert code == 0 and rep["ok"]


def test_cli_cspace_report(tmp_path, capsys):
    oct_path = tmp_path / "oct.json"
    sub_path = tmp_path / "sub.json"
    run(capsys, "gen", "cross-polytope", "--dim", "3", "-o", str(oct_path))
    run(capsys, "move", "subdivide", "--edge", "1,2", str(oct_path), "-o", str(sub_path))
    code, rep = run_json(capsys, "cspace", "--edge", "1,4", str(sub_path))
    assert code == 0
    assert rep["status"] == "point"
    assert rep["interval"] == {"lo": "0", "hi": "0", "lo_tight": True, "hi_tight": True}
    kinds = {c["kind"] for c in rep["constraints"]}
    assert kinds == {"boundary", "off_wall"}

    code, rep = run_json(capsys, "cspace", "--edge", "1,2", str(oct_path))
    assert code == 0
    assert rep["status"] == "empty" and rep["union_convex"] is False
    assert "witness" in rep and "failure_reason" in rep


def test_cli_lsop_wallclass_and_realize(tmp_path, capsys):
    oct_path = tmp_path / "oct.json"
    sub_path = tmp_path / "sub.json"
    real_path = tmp_path / "real.json"
    run(capsys, "gen", "cross-polytope", "--dim", "3", "-o", str(oct_path))
    run(capsys, "move", "subdivide", "--edge", "1,2", "--eta", "1/2", str(oct_path), "-o", str(sub_path))

    code, rep = run_json(capsys, "lsop", "wallclass", "--wall", "1,3", str(sub_path))
    assert code == 0
    assert rep["coefficients"] == {"-2": "1", "1": "-1", "3": "0", "4": "3/2"}
    assert rep["classes"] == {"1": "StrictlyConvex", "3": "Flat"}

    seed = "1=1,0,0;2=0,1,0;3=0,0,1;4=1/2,1/2,0"
    code, _ = run(capsys, "lsop", "realize", "--seed", seed, str(sub_path), "-o", str(real_path))
    assert code == 0
    doc = parse(real_path.read_bytes())
    coords = dict(doc.vertices)
    assert coords[-1] == (F(-3, 4), F(1, 4), F(0))
    assert coords[-2] == (F(1, 4), F(-3, 4), F(0))
    assert coords[-3] == (F(0), F(0), F(-1))


def test_cli_lsop_trace_reproduces_columns(tmp_path, capsys):
    path = tmp_path / "moved.json"
    doc = from_realized(moved_fixture(), lsop=None)
    # trace only needs the move log; attach the replayed lsop for comparison
    path.write_bytes(serialize(doc))
    code, rep = run_json(capsys, "lsop", "trace", str(path))
    assert code == 0
    assert rep["nrows"] == 4
    for body in rep["columns"].values():
        assert body["entries"]
        for entry in body["entries"]:
            assert entry["kind"] in {"base", "subdivide", "suspend"}
            num, _, den = entry["weight"].partition("/")
            assert abs(int(num)) == 1
            assert den == "" or (int(den) & (int(den) - 1)) == 0


def test_cli_analyze_reports(tmp_path, capsys):
    oct_path = tmp_path / "oct.json"
    run(capsys, "gen", "cross-polytope", "--dim", "3", "-o", str(oct_path))

    code, rep = run_json(capsys, "analyze", "4cycles", str(oct_path))
    assert code == 0
    assert len(rep["cycles"]) == 3

    code, rep = run_json(capsys, "analyze", "flat", str(oct_path))
    assert code == 0
    assert rep["all_crossings_convex"] and len(rep["flat_pairs"]) == 24

    code, rep = run_json(capsys, "analyze", "span-classes", "--vertex", "1", str(oct_path))
    assert code == 0
    assert rep["applicable"] and len(rep["classes"]) == 1
    assert rep["classes"][0]["strongly_connected"]

    code, rep = run_json(
        capsys,
        "analyze",
        "move-diff",
        "--move",
        "subdivide",
        "--edge",
        "1,2",
        "--observed=1,-2",
        str(oct_path),
    )
    assert code == 0
    assert len(rep["new_4cycles"]) == 3 and len(rep["lost_4cycles"]) == 1
    assert rep["cspace_before"]["status"] == "empty"

    sub_path = tmp_path / "sub.json"
    run(capsys, "move", "subdivide", "--edge", "1,2", str(oct_path), "-o", str(sub_path))
    code, rep = run_json(
        capsys,
        "analyze",
        "subdiv-effect",
        "--edge",
        "1,4",
        "--subdivide=1,3",
        str(sub_path),
    )
    assert code == 0
    assert rep["case"] == "2b-common-link" and rep["after"]["status"] == "empty"

    code, rep = run_json(
        capsys,
        "analyze",
        "ext-contract-effect",
        "--edge=-2,-1",
        "--contract=-3,-2",
        str(sub_path),
    )
    assert code == 0
    assert rep["case"] == "endpoint"
    assert rep["entries"][0]["threshold"] == "-1/2"


def test_cli_report_table_in_both_positions(tmp_path, capsys):
    path = tmp_path / "oct.json"
    run(capsys, "gen", "cross-polytope", "--dim", "2", "-o", str(path))
    code, out = run(capsys, "--report", "table", "check", str(path))
    assert code == 0
    assert out.splitlines()[0] == "pseudomanifold:"
    code2, out2 = run(capsys, "check", str(path), "--report", "table")
    assert code2 == 0 and out2 == out


def test_cli_error_exits_with_two(tmp_path, capsys):
    assert main(["check", str(tmp_path / "absent.json")]) == 2
    path = tmp_path / "oct.json"
    run(capsys, "gen", "cross-polytope", "--dim", "3", "-o", str(path))
    capsys.readouterr()
    assert main(["cspace", "--edge=9,10", str(path)]) == 2
    hex_path = tmp_path / "hex.json"
    run(capsys, "gen", "hexagon", "-o", str(hex_path))
    capsys.readouterr()
    assert main(["lsop", "check", str(hex_path)]) == 2


def test_installed_script_pipes_through_stdin(tmp_path):
    gen = subprocess.run(
        ["plconvex", "gen", "cross-polytope", "--dim", "2", "-o", "-"],
        capture_output=True,
        check=True,
    )
    chk = subprocess.run(
        ["plconvex", "check", "-", "--assert", "convex"],
        input=gen.stdout,
        capture_output=True,
    )
    assert chk.returncode == 0
    assert json.loads(chk.stdout)["convex"]["ok"]
