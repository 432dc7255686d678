from __future__ import annotations

import pytest

from specat.catcore import FunctorData, Subcategory, groupoid_component, opposite
from specat.constructive import (
    HomCache,
    aut_group_of_cover,
    bridge,
    bridge_end,
    compose_con,
    con_coproduct,
    con_fiber_product,
    deck,
    ev,
    groupoid_category,
    hom_count,
    identity_con,
    identity_link,
    induced_morphism,
    is_con_iso,
    is_constructive,
    lift_iso,
    mono_in_fragment,
    op_constructive,
    point_cover,
    pushforward_groupoid,
    pushout_bridges,
    restrict_to_groupoid,
    same_morphism,
    universal_cover,
)
from specat.corpus import fixture
from specat.errors import (
    LiftMissing,
    NoColimit,
    NotAnIso,
    NotConnectedGroupoid,
    NotFaithful,
    NotMaximalGroupoid,
    VIsInvertible,
)


def test_point_covers(z2, iso2, arrow):
    assert len(point_cover(z2, "s0").total.objects) == 2
    cover = point_cover(iso2, "a")
    assert set(cover.total.objects) == {"(a,id_a)", "(b,i)"}
    assert cover.base is iso2
    assert len(point_cover(arrow, "A").total.objects) == 1


def test_constructive_needs_faithful_functors():
    par2, arrow = fixture("Par2"), fixture("Arrow")
    F = FunctorData(par2, arrow, {"A": "A", "B": "B"}, {"id_A": "id_A", "id_B": "id_B", "f": "f", "g": "f"})
    with pytest.raises(NotFaithful):
        is_constructive(F)


def test_isomorphisms_must_lift(z2):
    one = fixture("One")
    F = FunctorData(one, z2, {"o": "s0"}, {"id_o": "id_s0"})
    with pytest.raises(LiftMissing):
        is_constructive(F)


def test_lift_iso_rejects_non_isomorphisms(arrow):
    cover = point_cover(arrow, "A")
    with pytest.raises(NotAnIso):
        lift_iso(cover, "(A,id_A)", "f")


def test_fiber_points_are_morphisms_out_of_the_cover(z2):
    cover = point_cover(z2, "s0")
    table = ev(cover, cover, "s0")
    assert set(table) == set(cover.total.objects)
    assert all(is_con_iso(phi) for phi in table.values())


def test_deck_transformations(z2):
    phi = deck(z2, "s")
    assert phi.functor.object_map["(s0,id_s0)"] == "(s0,s)"
    group, decks = aut_group_of_cover(z2, "s0")
    assert group.order == 2
    assert set(decks) == {"id_s0", "s"}


def test_bridge_over_an_arrow(arrow):
    b = bridge(arrow, "f", "A", "B")
    assert b.ends == ("A", "B") and b.forward
    assert len(b.functor.total.objects) == 2
    assert b.link.direction() == 1
    assert hom_count(point_cover(arrow, "B"), b.functor) == 1
    assert hom_count(point_cover(arrow, "A"), point_cover(arrow, "B")) == 0


def test_bridges_need_non_invertible_morphisms(iso2):
    with pytest.raises(VIsInvertible):
        bridge(iso2, "i", "a", "b")


def test_pushout_of_bridges(chain3):
    glued = pushout_bridges(bridge(chain3, "f", "A", "B"), bridge(chain3, "g", "B", "C"))
    assert len(glued.obj.total.objects) == 3
    assert "h" in set(glued.obj.functor.morphism_map.values())


def test_pushout_needs_exactly_one_shared_end():
    par2 = fixture("Par2")
    with pytest.raises(NoColimit):
        pushout_bridges(bridge(par2, "f", "A", "B"), bridge(par2, "g", "A", "B"))


def test_coproduct_and_monos(arrow):
    left, right = point_cover(arrow, "A"), point_cover(arrow, "B")
    coproduct = con_coproduct(left, right)
    assert len(coproduct.obj.total.objects) == 2
    assert mono_in_fragment(coproduct.left, [left, right])
    assert mono_in_fragment(identity_con(left), [left, right, coproduct.obj])


def test_opposite_of_a_cover(arrow):
    F = op_constructive(point_cover(arrow, "A"))
    assert F.base.same_table(opposite(arrow))


def test_restrict_and_pushforward(iso2):
    G = groupoid_component(iso2, "a")
    restricted = restrict_to_groupoid(G, point_cover(iso2, "a"))
    assert len(restricted.total.objects) == 2
    assert restricted.base.name == groupoid_category(G).name
    pushed = pushforward_groupoid(G, universal_cover(groupoid_category(G), "a"))
    assert pushed.base is iso2


def test_pushforward_needs_a_maximal_groupoid(iso2):
    small = Subcategory(iso2, frozenset({"a"}), frozenset({"id_a"}))
    with pytest.raises(NotMaximalGroupoid):
        pushforward_groupoid(small, universal_cover(groupoid_category(small), "a"))


def test_universal_cover_needs_a_groupoid(arrow):
    with pytest.raises(NotConnectedGroupoid):
        universal_cover(arrow, "A")


def test_fiber_product_over_the_identity(z2):
    cover = point_cover(z2, "s0")
    data = con_fiber_product(identity_con(cover), identity_con(cover))
    assert len(data.obj.total.objects) == 2
    assert set(data.first.object_map.values()) == set(cover.total.objects)


def test_fold_of_a_coproduct_is_not_mono(z2):
    cover = point_cover(z2, "s0")
    coproduct = con_coproduct(cover, cover)
    fold = induced_morphism(coproduct.obj, cover, {f"{tag}:{y}": y for tag in "01" for y in cover.total.objects})
    assert same_morphism(compose_con(fold, coproduct.left), compose_con(fold, coproduct.right))
    assert not mono_in_fragment(fold, [cover, coproduct.obj])


def test_pushout_property_is_checked_against_the_fragment(chain3):
    f, g = bridge(chain3, "f", "A", "B"), bridge(chain3, "g", "B", "C")
    covers = [point_cover(chain3, e) for e in ("A", "B", "C")]
    homs = HomCache()
    glued = pushout_bridges(f, g, covers + [f.functor, g.functor], at=(1, 0), homs=homs)
    assert len(glued.obj.total.objects) == 3
    assert homs(f.functor, covers[2]) is homs(f.functor, covers[2])
    with pytest.raises(NoColimit):
        pushout_bridges(f, g, at=(0, 0))


def test_identity_link_has_two_copies_of_the_cover(z2):
    cover = point_cover(z2, "s0")
    link = identity_link(z2, "s0")
    assert link.ends == ("s0", "s0")
    assert len(link.functor.total.objects) == 2 * len(cover.total.objects)
    left, right = bridge_end(link, 0), bridge_end(link, 1)
    assert set(left.functor.object_map.values()).isdisjoint(right.functor.object_map.values())
