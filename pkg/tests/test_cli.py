"""End-to-end tests for the command line, run in-process through main()."""

import itertools
import json

import pytest

from cutgrids.bordisms import catalog, shrink_to_core
from cutgrids.cli import main
from cutgrids.documents import document_for, parse_document, serialize_document
from cutgrids.finitecat import TruncSSet, chain_poset, nerve
from cutgrids.shapes import MonotoneMap


def write_doc(tmp_path, payload, stem):
    path = tmp_path / f"{stem}.json"
    path.write_text(serialize_document(document_for(payload, stem)))
    return str(path)


def triangle_boundary() -> TruncSSet:
    # all monotone vertex triples except the nondegenerate interior (0,1,2)
    verts = frozenset((i,) for i in range(3))
    edges = frozenset((i, j) for i in range(3) for j in range(3) if i <= j)
    tris = frozenset(
        t
        for t in itertools.combinations_with_replacement(range(3), 3)
        if t != (0, 1, 2)
    )
    faces = {}
    for k, cells in ((1, edges), (2, tris)):
        for i in range(k + 1):
            faces[(k, i)] = {c: c[:i] + c[i + 1:] for c in cells}
    degeneracies = {}
    for k, cells in ((0, verts), (1, edges)):
        for i in range(k + 1):
            degeneracies[(k, i)] = {c: c[: i + 1] + c[i:] for c in cells}
    return TruncSSet(2, (verts, edges, tris), faces, degeneracies)


def test_examples_reports_every_catalog_item(capsys):
    assert main(["examples"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert all(line.endswith(": pass") for line in lines)
    assert any(line.startswith("circle_trace:") for line in lines)


def test_examples_emits_one_item(tmp_path, capsys):
    out = tmp_path / "elbow.json"
    assert main(["examples", "elbow_right", "-o", str(out)]) == 0
    doc = parse_document(out.read_text())
    assert doc.kind == "bordism"
    assert doc.name == "elbow_right"
    assert main(["examples", "nonsense"]) == 1
    assert "unknown example" in capsys.readouterr().err


def test_validate_prints_a_report_line_per_check(tmp_path, capsys):
    f = write_doc(tmp_path, catalog("elbow_right"), "elbow")
    assert main(["validate", f]) == 0
    out = capsys.readouterr().out
    assert "[pass] labels" in out
    assert "[FAIL]" not in out


def test_validate_fails_on_bad_payload_data(tmp_path, capsys):
    f = write_doc(tmp_path, catalog("elbow_right"), "elbow")
    obj = json.loads(open(f).read())
    comp = obj["payload"]["grid"][0][0]["components"][0]
    comp["zeros"] = [["1", "+"], ["0", "-"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    assert main(["validate", str(bad)]) == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_parse_errors_exit_2(tmp_path, capsys):
    f = tmp_path / "broken.json"
    f.write_text('{"format": "cutgrids-document",\n  "version": 1,,}')
    assert main(["validate", str(f)]) == 2
    assert capsys.readouterr().err.startswith("error: line 2")
    assert main(["validate", str(tmp_path / "missing.json")]) == 2


def test_usage_errors_exit_2(tmp_path):
    f = write_doc(tmp_path, catalog("triangle_interval"), "tri")
    with pytest.raises(SystemExit) as stop:
        main(["compose", f])  # --direction/--face are required
    assert stop.value.code == 2


def test_compose_writes_the_composed_document(tmp_path, capsys):
    f = write_doc(tmp_path, catalog("triangle_interval"), "tri")
    out = tmp_path / "composed.json"
    assert main(["compose", f, "--direction", "1", "--face", "1",
                 "-o", str(out)]) == 0
    composed = parse_document(out.read_text()).payload
    zs = [c.components[0].zeros for c in composed.mgrid.grid.tuples[0].cuts]
    assert zs == [((-1, "+"),), ((1, "+"),)]
    assert main(["compose", f, "--direction", "1", "--face", "0"]) == 1
    assert "inner face index" in capsys.readouterr().err


def test_boundary_extracts_a_vertex(tmp_path):
    f = write_doc(tmp_path, catalog("triangle_interval"), "tri")
    out = tmp_path / "source.json"
    assert main(["boundary", f, "--direction", "1", "--vertex", "0",
                 "-o", str(out)]) == 0
    vertex = parse_document(out.read_text()).payload
    assert vertex.mgrid.grid.tuples[0].cuts[0].components[0].zeros == \
        ((-1, "+"),)


def test_classify_distinguishes_germs(tmp_path, capsys):
    a = write_doc(tmp_path, catalog("elbow_right"), "a")
    b = write_doc(tmp_path, shrink_to_core(catalog("elbow_right"), 1), "b")
    c = write_doc(tmp_path, catalog("elbow_right", 0, 2), "c")
    assert main(["classify", a, b]) == 0
    assert capsys.readouterr().out.strip() == "equivalent"
    assert main(["classify", a, c]) == 1
    assert capsys.readouterr().out.strip() == "inequivalent"


def test_product_needs_disjoint_ambients(tmp_path, capsys):
    near = write_doc(tmp_path, shrink_to_core(catalog("point1d"), 1), "near")
    far = write_doc(
        tmp_path, shrink_to_core(catalog("point1d", 5, "-"), 1), "far")
    out = tmp_path / "product.json"
    assert main(["product", near, far, "-o", str(out)]) == 0
    prod = parse_document(out.read_text()).payload
    assert prod.mgrid.labels == (1, 2)
    whole_line = write_doc(tmp_path, catalog("point1d", 5), "whole")
    assert main(["product", near, whole_line]) == 1
    assert "shrink_to_core" in capsys.readouterr().err


def test_family_eval_takes_exact_parameters(tmp_path, capsys):
    f = write_doc(tmp_path, catalog("triangle_family"), "fam")
    out = tmp_path / "fiber.json"
    assert main(["family-eval", f, "--t", "1/2", "-o", str(out)]) == 0
    fiber = parse_document(out.read_text()).payload
    assert fiber.mgrid.grid.tuples[0].cuts[1].components[0].zeros == \
        ((0, "+"),)
    assert main(["family-eval", f, "--t", "2"]) == 1
    assert "outside" in capsys.readouterr().err
    assert main(["family-eval", f, "--t", "x"]) == 2


def test_length_prints_an_exact_rational(tmp_path, capsys):
    f = write_doc(tmp_path, catalog("metric_interval", 0, 1, "3/2"), "m")
    assert main(["length", f]) == 0
    assert capsys.readouterr().out.strip() == "3/2"
    g = write_doc(tmp_path, catalog("point1d"), "p")
    assert main(["length", g]) == 1
    assert "metric" in capsys.readouterr().err


def test_wrong_payload_kind_is_a_domain_error(tmp_path, capsys):
    f = write_doc(tmp_path, chain_poset(1), "cat")
    assert main(["length", f]) == 1
    assert "expected a bordism document" in capsys.readouterr().err


def test_segal_check_verdicts(tmp_path, capsys):
    good = write_doc(tmp_path, nerve(chain_poset(2), 2), "nerve")
    assert main(["segal-check", good, "--a", "1", "--b", "1"]) == 0
    assert capsys.readouterr().out.strip() == "segal(1,1): pass"
    bad = write_doc(tmp_path, triangle_boundary(), "boundary")
    assert main(["segal-check", bad, "--a", "1", "--b", "1"]) == 1
    assert capsys.readouterr().out.strip() == "segal(1,1): FAIL"
    assert main(["segal-check", good, "--a", "9", "--b", "1"]) == 1


def test_render_is_deterministic(tmp_path):
    f = write_doc(tmp_path, catalog("composable_pair_2d"), "pair")
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["render", f, "-o", str(first)]) == 0
    assert main(["render", f, "-o", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text().startswith("<svg")


def test_render_window_accepts_the_equals_form(tmp_path, capsys):
    # leading minus signs require --window=… so argparse keeps them whole
    f = write_doc(tmp_path, catalog("elbow_right"), "elbow")
    out = tmp_path / "elbow.svg"
    assert main(["render", f, "--window=-3,3,-3,3", "-o", str(out)]) == 0
    assert out.read_text().startswith("<svg")
    assert main(["render", f, "--window=-3", "-o", str(out)]) == 2
    assert "--window" in capsys.readouterr().err
    assert main(["render", f, "--window=3,-3", "-o", str(out)]) == 1


def test_render_evaluates_families_at_t(tmp_path):
    f = write_doc(tmp_path, catalog("point_isotopy"), "iso")
    out = tmp_path / "iso.svg"
    assert main(["render", f, "--t", "1/2", "--window=-2,2",
                 "-o", str(out)]) == 0
    assert out.read_text().startswith("<svg")
