from __future__ import annotations

import pytest
from hypothesis import given, settings

from specat.catcore import (
    CategoryDescription,
    automorphism_group,
    check_laws,
    connected_components,
    dis,
    disjoint_union,
    groupoid_component,
    inverse_of,
    is_connected,
    is_isomorphism,
    is_monomorphism,
    is_order,
    is_preorder,
    make_ordered_set,
    maximal_groupoids,
    minimal_objects,
    mor_brace,
    mor_brace_noninv,
    opposite,
    order_from_relation,
    skeleton,
    validate_category,
)
from specat.corpus import fixture
from specat.errors import (
    DanglingEndpoint,
    DuplicateId,
    LawViolation,
    NonTotalComposition,
    RelationNotReflexiveTransitive,
    UnknownObject,
)
from strategies import small_categories


def test_arrow_completes_identities(arrow):
    assert set(arrow.objects) == {"A", "B"}
    assert set(arrow.morphisms) == {"id_A", "id_B", "f"}
    assert arrow.compose("f", "id_A") == "f"


def test_missing_composite_is_reported():
    raw = CategoryDescription("Broken", ("A", "B", "C"), (("f", "A", "B"), ("g", "B", "C")))
    with pytest.raises(NonTotalComposition):
        validate_category(raw)


def test_duplicate_and_dangling_identifiers():
    with pytest.raises(DuplicateId):
        validate_category(CategoryDescription("D", ("A", "A"), ()))
    with pytest.raises(DanglingEndpoint):
        validate_category(CategoryDescription("D", ("A",), (("f", "A", "B"),)))


def test_associativity_failure_lists_witnesses():
    raw = CategoryDescription(
        "M",
        ("o",),
        (("a", "o", "o"), ("b", "o", "o")),
        (("a", "a", "b"), ("a", "b", "a"), ("b", "a", "b"), ("b", "b", "a")),
    )
    with pytest.raises(LawViolation) as info:
        validate_category(raw)
    assert any("associativity" in v for v in info.value.violations)


@settings(max_examples=30, deadline=None)
@given(small_categories())
def test_opposite_is_an_involution(C):
    assert opposite(opposite(C)).same_table(C)
    assert not check_laws(opposite(C))


@settings(max_examples=30, deadline=None)
@given(small_categories())
def test_describe_then_validate_gives_the_same_table(C):
    assert validate_category(C.describe()).same_table(C)


def test_isomorphisms_and_inverses(iso2, arrow):
    assert is_isomorphism(iso2, "i")
    assert inverse_of(iso2, "i") == "j"
    assert not is_isomorphism(arrow, "f")


def test_mor_brace_collects_both_directions(iso2):
    assert mor_brace(iso2, "a", "b") == frozenset({"i", "j"})
    assert mor_brace_noninv(iso2, "a", "b") == frozenset()


def test_components_of_a_disjoint_union(arrow, z2):
    union = disjoint_union(arrow, z2)
    assert connected_components(union) == [frozenset({"0:A", "0:B"}), frozenset({"1:s0"})]
    assert not is_connected(union)
    assert is_connected(arrow)


def test_groupoid_component_and_skeleton(iso2, arrow):
    G = groupoid_component(iso2, "a")
    assert G.objects == frozenset({"a", "b"})
    assert G.morphisms == frozenset(iso2.morphisms)
    sk, inclusion = skeleton(iso2)
    assert sk.objects == ("a",)
    assert inclusion.object_map == {"a": "a"}
    assert len(maximal_groupoids(arrow)) == 2


def test_unknown_object_is_rejected(arrow):
    with pytest.raises(UnknownObject):
        groupoid_component(arrow, "Z")


def test_monomorphisms_and_minimal_objects(arrow):
    assert is_monomorphism(arrow, "f")
    assert minimal_objects(arrow) == frozenset({"B"})


def test_orders():
    T = order_from_relation(["x", "y"], [("x", "x"), ("y", "y"), ("x", "y")])
    assert is_order(T)
    assert is_preorder(dis(["p", "q"]))
    assert not is_order(fixture("Iso2"))
    with pytest.raises(RelationNotReflexiveTransitive):
        make_ordered_set(["x", "y"], [("x", "y")])
    closed = make_ordered_set(["x", "y", "z"], [("x", "y"), ("y", "z")], close=True)
    assert closed.leq("x", "z")


def test_automorphism_group_of_z2(z2):
    group = automorphism_group(z2, "s0")
    assert group.order == 2
    assert group.multiply("s", "s") == "id_s0"
    assert group.inverse("s") == "s"


def test_composite_on_a_non_composable_pair():
    raw = CategoryDescription("Arrow", ("A", "B"), (("f", "A", "B"),), (("f", "f", "f"),))
    with pytest.raises(NonTotalComposition):
        validate_category(raw)
