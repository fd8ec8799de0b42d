"""Command-line contract: exit codes 0/1/2/3 and JSON reports."""

import json

import pytest

from bvhy import serialize
from bvhy.cli import main
from bvhy.models import build_torus_model, build_trivial_model, \
    builtin_footprints, search_nonformal


def _write(path, doc):
    path.write_text(serialize.dump(doc))
    return str(path)


@pytest.fixture()
def torus_file(tmp_path):
    return _write(tmp_path / "torus.json",
                  serialize.algebra_to_json(build_torus_model(1, 1).algebra))


def _footprint_file(tmp_path, name):
    for nf in builtin_footprints():
        if nf.name == name:
            return _write(tmp_path / f"{name}.json",
                          serialize.footprint_to_json(nf.footprint))
    raise KeyError(name)


def test_validate_passes_on_torus(torus_file, capsys):
    assert main(["validate", torus_file]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["passed"] is True
    assert {r["title"] for r in out["results"]} == \
        {"bv-axioms", "side-conditions", "strong-trivialization"}
    assert torus_file in out["inputs"]


def test_validate_fails_on_perturbed_delta(tmp_path, capsys):
    doc = serialize.algebra_to_json(build_torus_model(1, 1).algebra)
    # tamper with one delta coefficient: still shift-valid, no longer order-2
    src, tgt, val = doc["delta"][0]
    doc["delta"][0] = [src, tgt, "7/2"]
    path = _write(tmp_path / "broken.json", doc)
    assert main(["validate", path]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["passed"] is False


def test_malformed_bidegree_exits_2_and_names_entry(tmp_path, capsys):
    doc = serialize.algebra_to_json(build_trivial_model(1).algebra)
    doc["basis"][1] = {"name": "x1", "p": "one", "q": 0}
    path = _write(tmp_path / "bad.json", doc)
    assert main(["validate", path]) == 2
    err = capsys.readouterr().err
    assert "basis[1] (x1)" in err and "malformed bidegree" in err


def test_invalid_json_exits_2(tmp_path, capsys):
    path = tmp_path / "garbage.json"
    path.write_text("{not json")
    assert main(["validate", str(path)]) == 2
    assert "invalid JSON" in capsys.readouterr().err
    assert main(["validate", str(tmp_path / "missing.json")]) == 2


def test_transfer_trivial_model_table(tmp_path, capsys):
    path = _write(tmp_path / "trivial.json",
                  serialize.algebra_to_json(build_trivial_model(2).algebra))
    out_path = tmp_path / "table.json"
    assert main(["transfer", path, "--max-arity", "4",
                 "--out", str(out_path)]) == 0
    table = json.loads(out_path.read_text())
    nonzero = {(op["arity"], op["brackets"]) for op in table["operations"]
               if op["entries"]}
    assert nonzero == {(2, 0)}
    assert table["formal_unit"]["passed"] is True
    # the exterior algebra tops out at (2,0), not on the (n,n) diagonal
    assert "skipped" in table["top_degree"]


def test_transfer_torus_top_degree_report(tmp_path):
    path = _write(tmp_path / "torus10.json",
                  serialize.algebra_to_json(build_torus_model(1, 0).algebra))
    out_path = tmp_path / "table.json"
    assert main(["transfer", path, "--max-arity", "4",
                 "--out", str(out_path)]) == 0
    table = json.loads(out_path.read_text())
    nonzero = {(op["arity"], op["brackets"]) for op in table["operations"]
               if op["entries"]}
    assert nonzero == {(2, 0)}
    assert table["top_degree"]["passed"] is True


def test_transfer_arity_guard(torus_file, capsys):
    assert main(["transfer", torus_file, "--max-arity", "8"]) == 2
    assert "--force" in capsys.readouterr().err


def test_transfer_witness_model_exposes_higher_operation(tmp_path, capsys):
    m = search_nonformal(seed=0)
    path = _write(tmp_path / "witness.json",
                  serialize.algebra_to_json(m.algebra))
    out_path = tmp_path / "wtable.json"
    assert main(["transfer", path, "--max-arity", "3",
                 "--out", str(out_path)]) == 0
    table = json.loads(out_path.read_text())
    higher = [op for op in table["operations"]
              if op["arity"] == 3 and op["brackets"] == 0][0]
    assert higher["kind"] == "higher" and higher["entries"]
    # the top bidegree of the witness space is not of the form (n,n)
    assert "skipped" in table["top_degree"]


def test_certify_exit_codes(tmp_path, capsys):
    assert main(["certify", _footprint_file(tmp_path, "quintic")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] == "formal"
    assert main(["certify", _footprint_file(tmp_path, "hypersurface-5")]) == 3
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"].startswith("not certified")
    assert main(["certify", _footprint_file(tmp_path, "violating-4")]) == 3
    out = json.loads(capsys.readouterr().out)
    assert "footprint hypothesis fails" in out["verdict"]


def test_certify_assume_top_bottom_flag(tmp_path, capsys):
    path = _footprint_file(tmp_path, "k3")
    assert main(["certify", path, "--assume-top-bottom", "false"]) == 0
    out = json.loads(capsys.readouterr().out)
    cases = {c["case"]: c["verdict"] for c in out["certificate"]["cases"]}
    assert cases["two or more formal arguments"] == "not-excluded"


def test_search_round_trip_through_validate(tmp_path, capsys):
    out_path = tmp_path / "witness.json"
    assert main(["search", "--seed", "0", "--out", str(out_path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is True and report["witness"]["arity"] == 3
    # the exported witness must itself validate cleanly
    assert main(["validate", str(out_path)]) == 0


def test_validate_with_separate_gram_file(tmp_path, capsys):
    from bvhy.models import build_skew_gram_model
    m = build_skew_gram_model()
    doc = serialize.algebra_to_json(m.algebra, m.inner_product)
    gram_entries = doc.pop("gram")
    algebra_path = _write(tmp_path / "algebra.json", doc)
    gram_path = _write(tmp_path / "gram.json", {"gram": gram_entries})
    assert main(["validate", algebra_path, "--gram", gram_path]) == 0
