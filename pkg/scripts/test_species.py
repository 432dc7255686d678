from __future__ import annotations

import pytest
from hypothesis import given, settings

from specat.catcore import OrderedSet
from specat.constructive import is_constructive
from specat.corpus import constant_species
from specat.docfile import load_category
from specat.errors import MonotonicityViolation, PayloadTooLarge, SubfunctorViolation
from specat.species import (
    SpeciesMorphism,
    StructureSpecies,
    compose_species_morphisms,
    family_name,
    finite_sets,
    identity_species_morphism,
    powerset,
    powerset_contravariant,
    powerset_covariant,
    realize,
    realize_morphism,
    topologies,
    topology_species,
    validate_species,
    validate_species_morphism,
)
from strategies import small_categories

CHAIN = OrderedSet(("lo", "hi"), frozenset({("lo", "lo"), ("hi", "hi"), ("lo", "hi")}))


@settings(max_examples=30, deadline=None)
@given(small_categories())
def test_constant_species_realizes_two_objects_per_object(C):
    sigma = validate_species(constant_species(C))
    F = realize(sigma)
    assert len(F.total.objects) == 2 * len(C.objects)
    is_constructive(F.functor)


def test_topologies_by_brute_force():
    assert len(topologies(("p", "q"))) == 4
    assert len(topologies(("p", "q", "r"))) == 29
    assert len(powerset(("p", "q"))) == 4


def test_topology_species_on_two_points():
    Z = finite_sets({"T": ("p", "q")})
    sigma = validate_species(topology_species(Z, {"T": ("p", "q")}, {}))
    assert len(realize(sigma).fiber("T")) == 4


def test_topology_species_refuses_large_sets():
    Z = finite_sets({"T": ("a", "b", "c", "d")})
    with pytest.raises(PayloadTooLarge):
        topology_species(Z, {"T": ("a", "b", "c", "d")}, {})


def test_powerset_maps():
    f = {"a": "x", "b": "x"}
    image = powerset_covariant(f, ("a", "b"))
    assert image[frozenset({"a"})] == frozenset({"x"})
    preimage = powerset_contravariant(f, ("a", "b"), ("x", "y"))
    assert preimage[frozenset({"x"})] == frozenset({"a", "b"})
    assert preimage[frozenset({"y"})] == frozenset()


ONE_INTO_TWO = """\
category Incl
object T
object S
morphism u : T -> S
"""


def test_topology_species_maps_between_different_point_sets():
    Z = load_category(ONE_INTO_TWO)
    points = {"T": ("p",), "S": ("p", "q")}
    coarse = family_name([frozenset(), frozenset({"p"})])
    # Without a map, the points of S keep their names.
    default = topology_species(Z, points, {})
    assert default.emaps["u"][coarse] == coarse
    collapse = topology_species(Z, points, {"u": {"p": "p", "q": "p"}})
    assert collapse.emaps["u"][coarse] == family_name([frozenset(), frozenset({"p", "q"})])
    assert set(collapse.emaps["u"]) == set(collapse.orders["T"].carrier)


def test_structures_must_be_preserved_by_isomorphisms(z2):
    swap = {"lo": "hi", "hi": "lo"}
    flat = OrderedSet(("lo", "hi"), frozenset({("lo", "lo"), ("hi", "hi")}))
    sigma = StructureSpecies(z2, {"s0": flat}, {"s": swap}, {"s0": ("lo",)}, name="Half")
    with pytest.raises(SubfunctorViolation):
        validate_species(sigma)


def test_species_morphisms_are_monotone(arrow):
    sigma = validate_species(constant_species(arrow))
    up = {a: {"lo": "hi", "hi": "hi"} for a in arrow.objects}
    validate_species_morphism(SpeciesMorphism(sigma, sigma, up))
    down = {a: {"lo": "lo", "hi": "lo"} for a in arrow.objects}
    validate_species_morphism(SpeciesMorphism(sigma, sigma, down))
    swap = {a: {"lo": "hi", "hi": "lo"} for a in arrow.objects}
    with pytest.raises(MonotonicityViolation) as info:
        validate_species_morphism(SpeciesMorphism(sigma, sigma, swap))
    assert info.value.witness is not None


def test_realized_morphisms_compose(arrow):
    sigma = validate_species(constant_species(arrow))
    up = SpeciesMorphism(sigma, sigma, {a: {"lo": "hi", "hi": "hi"} for a in arrow.objects})
    identity = identity_species_morphism(sigma)
    composed = compose_species_morphisms(up, identity)
    assert composed.components == up.components
    phi = realize_morphism(up)
    assert phi.functor.object_map["(A,lo)"] == "(A,hi)"
