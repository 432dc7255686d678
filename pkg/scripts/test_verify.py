from __future__ import annotations

import json

import pytest

from specat.corpus import fixture
from specat.docfile import load_category
from specat.reconstruct import build_fragment, recover
from specat.report import build_report, dump_json, render_text, to_jsonable
from specat.verify import CHECKS, CheckResult, Subject, all_passed, check_connected_one_side, run_battery, run_check


@pytest.fixture(scope="module")
def battery(twisted_pair):
    names = ("One", "Z2", "Arrow", "Iso2", "Par2", "Chain3", "Chain3X")
    categories = [fixture(name) for name in names] + [twisted_pair]
    return run_battery(categories, seed=0)


def test_battery_passes_on_the_fixtures(battery):
    assert list(battery) == list(CHECKS)
    failures = {name: r.failures for name, r in battery.items() if r.failed}
    assert not failures
    assert all_passed(battery)
    assert battery["roundtrip"].passed == 8


def test_single_check(chain3):
    result = run_check("bridge_composition", [chain3])
    assert result.failed == 0 and result.passed > 0
    with pytest.raises(KeyError):
        run_check("no_such_check", [chain3])


def test_failures_carry_the_offending_document(arrow):
    result = CheckResult("demo")
    result.record((False, "broken", {"x": 1}), arrow)
    result.record((True, "", {}), arrow)
    assert (result.passed, result.failed) == (1, 1)
    entry = result.failures[0]
    assert entry["category"] == "Arrow"
    assert load_category(entry["document"]).same_table(arrow)
    assert "elapsed_ms" not in result.as_dict()


def test_reports_are_deterministic(battery):
    verdict = {name: r.as_dict() for name, r in battery.items()}
    first = dump_json(build_report("verify", {"max_objects": 1}, verdict, seed=0))
    second = dump_json(build_report("verify", {"max_objects": 1}, verdict, seed=0))
    assert first == second
    data = json.loads(first)
    assert data["schema"] == 1
    assert data["timings_ms"] == {}


def test_jsonable_forms(arrow, z2):
    data = to_jsonable({"category": arrow, "members": frozenset({"b", "a"})})
    assert data["category"]["name"] == "Arrow"
    assert data["members"] == ["a", "b"]
    report = build_report("validate", {"file": "z2.cat"}, {"valid": True}, timings={"parse": 1.23456})
    assert report["timings_ms"] == {"parse": 1.235}
    text = render_text(report)
    assert text.startswith("validate\n")
    assert "valid: yes" in text


def test_connected_one_side_compares_with_the_input(chain3):
    subject = Subject(fixture("Par2"))
    assert all(ok for ok, _detail, _inputs in check_connected_one_side(subject))
    subject.recovered = recover(build_fragment(chain3, seed=0))
    outcomes = list(check_connected_one_side(subject))
    assert outcomes[0][0]
    assert not outcomes[1][0]
