from __future__ import annotations

import pytest

from specat.catcore import disjoint_union, opposite
from specat.corpus import fixture
from specat.errors import NoColimit, NotConnected, NotMinimal, SizeBound
from specat.functcore import are_equivalent
from specat.reconstruct import (
    assemble,
    base_automorphism,
    base_morphism,
    build_fragment,
    compare,
    compose_with_aut,
    dagger_aut,
    dagger_mor,
    detect_minimal,
    recover,
    recover_composition,
    recover_daggers,
    roundtrip,
)

ROUNDTRIP_FIXTURES = ["One", "Z2", "Arrow", "Par2", "Iso2", "Cospan", "Span", "Chain3", "Chain3X"]


@pytest.mark.parametrize("name", ROUNDTRIP_FIXTURES)
def test_roundtrip_recovers_the_category_up_to_duality(name):
    result = roundtrip(fixture(name), seed=7)
    assert result.passed
    assert result.matches in ("X", "X^op")
    assert set(result.timings_ms) == {"fragment", "recover", "assemble", "compare"}


def test_compare_separates_duals():
    verdict = compare(fixture("Cospan"), fixture("Span"))
    assert (verdict.equivalent, verdict.op_equivalent) == (False, True)
    assert "op_equivalent" in verdict.witnesses


def test_compare_sees_through_equivalence(iso2):
    verdict = compare(iso2, fixture("One"))
    assert verdict.equivalent and verdict.op_equivalent
    verdict = compare(fixture("Z2"), fixture("One"))
    assert not verdict.equivalent and not verdict.op_equivalent


def test_minimal_objects_are_the_point_covers(arrow):
    fragment = build_fragment(arrow, seed=1)
    expected = {fragment.key_of("point", e) for e in ("A", "B")}
    assert set(detect_minimal(fragment)) == expected


def test_groupoid_contributes_one_point(iso2):
    fragment = build_fragment(iso2, seed=1)
    assert set(detect_minimal(fragment)) == {fragment.key_of("point", "a")}


def test_parallel_arrows_give_two_classes():
    fragment = build_fragment(fixture("Par2"), seed=2)
    M, M2 = fragment.key_of("point", "A"), fragment.key_of("point", "B")
    assert len(dagger_mor(fragment, M, M2)) == 2


def test_automorphisms_of_a_point(z2):
    fragment = build_fragment(z2)
    M = fragment.key_of("point", "s0")
    assert dagger_aut(fragment, M).group.order == 2
    with pytest.raises(NotMinimal):
        dagger_aut(fragment, fragment.key_of("empty"))


def test_shuffle_is_deterministic_per_seed(chain3):
    first = build_fragment(chain3, seed=11)
    second = build_fragment(chain3, seed=11)
    assert first.provenance == second.provenance
    assert first.order == second.order


def test_flipped_orientation_gives_the_opposite(arrow):
    daggers = recover(build_fragment(arrow))
    assembled, orientation = assemble(daggers)
    flipped, flipped_orientation = assemble(daggers, flip=True)
    assert (orientation, flipped_orientation) == ("global", "global_op")
    assert are_equivalent(flipped, opposite(assembled))


def test_disconnected_input_is_rejected(arrow, z2):
    with pytest.raises(NotConnected):
        roundtrip(disjoint_union(arrow, z2))
    with pytest.raises(NotConnected):
        compare(disjoint_union(arrow, z2), arrow)


def test_size_bounds(monkeypatch, chain3):
    monkeypatch.setenv("SPECAT_MAX_MORPHISMS", "4")
    with pytest.raises(SizeBound):
        build_fragment(chain3)


def _class_of(fragment, classes, v):
    return next(i for i, dm in enumerate(classes) if base_morphism(fragment, dm) == v)


def test_twisted_pair_classes_are_represented_by_distinct_arrows(twisted_pair):
    fragment = build_fragment(twisted_pair, seed=7)
    daggers = recover(fragment)
    represented = sorted(base_morphism(fragment, dm) for dm in daggers.com.classes)
    assert represented == ["m0", "m1"]
    assert roundtrip(twisted_pair, seed=7).passed


def test_automorphisms_move_classes_exactly(twisted_pair):
    fragment = build_fragment(twisted_pair, seed=7)
    daggers = recover(fragment)
    classes = daggers.com.classes
    M = fragment.key_of("point", "B")
    name, swap = next(
        (n, u) for n, u in daggers.dagger_aut[M].elements.items() if base_automorphism(fragment, u) == "m2"
    )
    m0, m1 = _class_of(fragment, classes, "m0"), _class_of(fragment, classes, "m1")
    end = classes[m0].ends.index(M)
    assert compose_with_aut(fragment, swap, classes[m0], classes[m1], end=end)
    assert not compose_with_aut(fragment, swap, classes[m0], classes[m0], end=end)
    assert not compose_with_aut(fragment, swap, classes[m0], classes[m1], end=1 - end)
    assert daggers.com.actions[(m0, end, name)] == m1


def test_composition_is_read_from_the_fragment_alone():
    X = fixture("Chain3X")
    fragment = build_fragment(X, seed=3)
    fragment.hom_sizes()
    daggers = recover_daggers(fragment)
    X.table[("g", "f")] = "k"
    com = recover_composition(fragment, daggers).com
    f, g = _class_of(fragment, com.classes, "f"), _class_of(fragment, com.classes, "g")
    found = [c for (a, _ia, b, _ib), c in com.chains.items() if {a, b} == {f, g} and c is not None]
    assert found
    assert all(c.kind == "class" and base_morphism(fragment, com.classes[c.index]) == "h" for c in found)


def test_missing_pushouts_are_reported():
    fragment = build_fragment(fixture("Chain3"), seed=1)
    fragment.pushouts.clear()
    with pytest.raises(NoColimit):
        recover_composition(fragment)
