from __future__ import annotations

import json

from specat.catcore import opposite
from specat.corpus import fixture
from specat.docfile import load_category
from specat_cli import main


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_compare_reports_duality(fixture_dir, capsys):
    code = main(["compare", str(fixture_dir / "cospan.cat"), str(fixture_dir / "span.cat"), "--format", "json"])
    report = _json(capsys)
    assert code == 1
    assert report["command"] == "compare"
    assert report["verdict"] == {"equivalent": False, "op_equivalent": True}
    assert "op_equivalent" in report["witnesses"]


def test_strict_compare(fixture_dir, capsys):
    code = main(["compare", str(fixture_dir / "iso2.cat"), str(fixture_dir / "one.cat"), "--strict", "--format", "json"])
    assert code == 1
    assert _json(capsys)["verdict"]["equivalent"] is False
    code = main(["compare", str(fixture_dir / "iso2.cat"), str(fixture_dir / "one.cat"), "--format", "json"])
    assert code == 0
    assert _json(capsys)["verdict"]["equivalent"] is True


def test_cover_dump(fixture_dir, capsys):
    code = main(["cover", str(fixture_dir / "z2.cat"), "--object", "s0", "--format", "json"])
    report = _json(capsys)
    assert code == 0
    assert len(report["verdict"]["objects"]) == 2


def test_validate_reports_missing_composites(tmp_path, capsys):
    path = tmp_path / "broken.cat"
    path.write_text("category C\nobject A\nobject B\nobject C\nmorphism f : A -> B\nmorphism g : B -> C\n", encoding="utf-8")
    code = main(["validate", str(path), "--format", "json"])
    report = _json(capsys)
    assert code == 1
    assert report["verdict"]["valid"] is False
    assert report["witnesses"]["violations"]


def test_validate_species_section(fixture_dir, capsys):
    code = main(["validate", str(fixture_dir / "arrow_species.cat"), "--format", "json"])
    verdict = _json(capsys)["verdict"]
    assert code == 0
    assert verdict["species"] == "Chain"
    assert verdict["structures"] == 3


def test_syntax_errors_exit_with_two(tmp_path, capsys):
    path = tmp_path / "bad.cat"
    path.write_text("category X\nobject A\n  arrow f : A -> A\n", encoding="utf-8")
    assert main(["validate", str(path)]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["op", str(tmp_path / "missing.cat"), "--format", "json"]) == 2
    assert _json(capsys)["error"]


def test_op_prints_a_document(fixture_dir, capsys):
    assert main(["op", str(fixture_dir / "arrow.cat")]) == 0
    text = capsys.readouterr().out
    assert text.startswith("category ")
    assert load_category(text).same_table(opposite(fixture("Arrow")))


def test_species_top(fixture_dir, capsys):
    assert main(["species-top", "--points", "p,q", "--format", "json"]) == 0
    assert _json(capsys)["verdict"]["fiber_objects"] == 4
    assert main(["species-top", str(fixture_dir / "sierpinski.cat"), "--format", "json"]) == 0
    assert _json(capsys)["verdict"]["fiber_objects"] == 4


def test_reconstruct(fixture_dir, capsys):
    code = main(["reconstruct", str(fixture_dir / "chain3.cat"), "--format", "json", "--seed", "3"])
    report = _json(capsys)
    assert code == 0
    assert report["verdict"]["passed"] is True
    assert report["seed"] == 3
    assert set(report["timings_ms"]) == {"fragment", "recover", "assemble", "compare"}


def test_verify_is_deterministic(capsys):
    argv = ["verify", "--max-objects", "1", "--max-morphisms", "1", "--check", "roundtrip", "--format", "json"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    report = json.loads(first)
    assert report["timings_ms"] == {}
    assert report["verdict"]["checks"]["roundtrip"]["failed"] == 0
