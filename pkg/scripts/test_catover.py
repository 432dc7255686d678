from __future__ import annotations

import pytest

from specat.catover import (
    arrow_functor,
    build_cat_fragment,
    compare_strict,
    detect_minimal_cat,
    point_functor,
    roundtrip_strict,
    terminal_is_terminal,
)
from specat.corpus import fixture
from specat.docfile import load_category
from specat.errors import EndomorphismNotClosed, UnknownObject

Z3 = """\
category Z3
object s0
morphism s : s0 -> s0
morphism t : s0 -> s0
compose s s = t
compose s t = id_s0
compose t s = id_s0
compose t t = s
"""

STRICT_FIXTURES = ["One", "Z2", "Arrow", "Par2", "Iso2", "Cospan", "Span", "Chain3", "Chain3X"]


@pytest.mark.parametrize("name", STRICT_FIXTURES)
def test_strict_roundtrip_recovers_up_to_isomorphism(name):
    result = roundtrip_strict(fixture(name), seed=5)
    assert result.passed
    assert result.matches in ("X", "X^op")


def test_isomorphism_is_finer_than_equivalence(iso2):
    verdict = compare_strict(iso2, fixture("One"))
    assert not verdict.equivalent and not verdict.op_equivalent
    verdict = compare_strict(fixture("Cospan"), fixture("Span"))
    assert (verdict.equivalent, verdict.op_equivalent) == (False, True)


def test_every_object_is_a_point(iso2):
    fragment = build_cat_fragment(iso2, seed=3)
    expected = {fragment.key_of("point", e) for e in ("a", "b")}
    assert set(detect_minimal_cat(fragment)) == expected
    assert terminal_is_terminal(fragment)


def test_point_functor(arrow):
    F = point_functor(arrow, "B")
    assert F.source.objects == ("B",)
    assert F.object_map == {"B": "B"}
    with pytest.raises(UnknownObject):
        point_functor(arrow, "Z")


def test_arrow_functor(arrow, z2):
    F, upsilon = arrow_functor(arrow, "f")
    assert len(F.source.objects) == 2
    assert set(upsilon.object_map.values()) == set(F.source.objects)
    F, upsilon = arrow_functor(z2, "s")
    assert set(F.source.morphisms) == {"id_s0", "s"}
    assert set(upsilon.object_map.values()) == {"s0"}


def test_arrow_objects_come_from_arrow_functors(chain3):
    fragment = build_cat_fragment(chain3, seed=2)
    for v in ("f", "g", "h"):
        F, _upsilon = arrow_functor(chain3, v)
        built = fragment.objects[fragment.key_of("arrow", v)].functor
        assert built.source.same_table(F.source)
        assert built.morphism_map == F.morphism_map


def test_endomorphism_must_close():
    with pytest.raises(EndomorphismNotClosed):
        arrow_functor(load_category(Z3), "s")
