from __future__ import annotations

import pytest
from hypothesis import given, settings

from specat.catcore import FunctorData, automorphism_group, opposite
from specat.corpus import fixture
from specat.errors import FunctorLawViolation, LawViolation, SearchBudgetExceeded
from specat.functcore import (
    NaturalTransformationData,
    are_equivalent,
    compose_functors,
    enumerate_functors,
    find_group_isomorphism,
    find_isomorphism,
    identity_functor,
    is_faithful,
    is_full,
    op_functor,
    validate_functor,
    validate_natural_transformation,
)
from strategies import small_categories


def test_functors_from_arrow_to_itself(arrow):
    functors = list(enumerate_functors(arrow, arrow))
    assert len(functors) == 3
    for F in functors:
        validate_functor(F)


def test_cospan_and_span_are_dual():
    cospan, span = fixture("Cospan"), fixture("Span")
    assert find_isomorphism(cospan, span) is None
    witness = find_isomorphism(opposite(cospan), span)
    assert witness is not None
    validate_functor(witness)


def test_equivalence_is_coarser_than_isomorphism(iso2):
    one = fixture("One")
    assert find_isomorphism(iso2, one) is None
    assert are_equivalent(iso2, one)
    assert not are_equivalent(fixture("Z2"), one)


@settings(max_examples=30, deadline=None)
@given(small_categories(), small_categories())
def test_isomorphism_search_is_symmetric(C, D):
    assert (find_isomorphism(C, D) is None) == (find_isomorphism(D, C) is None)


@settings(max_examples=30, deadline=None)
@given(small_categories())
def test_identity_and_opposite_functors_obey_the_laws(C):
    F = identity_functor(C)
    validate_functor(F)
    validate_functor(op_functor(F))
    assert compose_functors(F, F).object_map == F.object_map
    assert is_faithful(F) and is_full(F)


def test_non_functor_is_rejected(arrow):
    broken = FunctorData(arrow, arrow, {"A": "B", "B": "A"}, {"id_A": "id_B", "id_B": "id_A", "f": "f"})
    with pytest.raises(FunctorLawViolation):
        validate_functor(broken)


def test_collapsing_functor_is_not_faithful():
    par2, arrow = fixture("Par2"), fixture("Arrow")
    F = FunctorData(par2, arrow, {"A": "A", "B": "B"}, {"id_A": "id_A", "id_B": "id_B", "f": "f", "g": "f"})
    validate_functor(F)
    assert not is_faithful(F)
    assert is_full(F)


def test_budget_is_enforced(chain3):
    with pytest.raises(SearchBudgetExceeded):
        list(enumerate_functors(chain3, chain3, budget=2))


def test_group_isomorphism(z2, iso2):
    assert find_group_isomorphism(automorphism_group(z2, "s0"), automorphism_group(z2, "s0")) == {"id_s0": "id_s0", "s": "s"}
    assert find_group_isomorphism(automorphism_group(z2, "s0"), automorphism_group(iso2, "a")) is None


def test_natural_transformations(arrow):
    par2 = fixture("Par2")
    along_f = FunctorData(arrow, par2, {"A": "A", "B": "B"}, {"id_A": "id_A", "id_B": "id_B", "f": "f"})
    along_g = FunctorData(arrow, par2, {"A": "A", "B": "B"}, {"id_A": "id_A", "id_B": "id_B", "f": "g"})
    validate_natural_transformation(NaturalTransformationData(along_f, along_f, {"A": "id_A", "B": "id_B"}))
    with pytest.raises(LawViolation):
        validate_natural_transformation(NaturalTransformationData(along_f, along_g, {"A": "id_A", "B": "id_B"}))
    with pytest.raises(LawViolation):
        validate_natural_transformation(NaturalTransformationData(along_f, along_f, {"A": "f", "B": "id_B"}))
