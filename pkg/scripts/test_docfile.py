from __future__ import annotations

import pytest

from specat.corpus import FIXTURES, fixture
from specat.docfile import build_species, from_category, load_category, normalize, parse, read_document, serialize
from specat.errors import DocumentSyntaxError, NonTotalComposition, PayloadTooLarge, SemanticError
from specat.species import realize, validate_species

ARROW = """\
# the walking arrow
category Arrow
object A   # source
object B
morphism f : A -> B
"""


def test_arrow_document_parses_with_implicit_identities():
    doc = parse(ARROW)
    assert doc.objects == ["A", "B"]
    C = load_category(ARROW)
    assert len(C.morphisms) == 3


def test_missing_compose_line_fails_validation():
    text = "category C\nobject A\nobject B\nobject C\nmorphism f : A -> B\nmorphism g : B -> C\n"
    with pytest.raises(NonTotalComposition):
        load_category(text)


def test_syntax_errors_carry_line_and_column():
    with pytest.raises(DocumentSyntaxError) as info:
        parse("category X\nobject A\n  arrow f : A -> A\n")
    assert (info.value.line, info.value.column) == (3, 3)
    with pytest.raises(DocumentSyntaxError) as info:
        parse("category X\nobject A\nmorphism f A -> A\n")
    assert info.value.line == 3


def test_semantic_errors():
    with pytest.raises(SemanticError):
        parse("category X\nobject A\nmorphism f : A -> B\n")
    with pytest.raises(SemanticError):
        parse("category X\nobject A\nmorphism f : A -> A\ncompose f f = f\ncompose f f = id_A\n")
    with pytest.raises(SemanticError):
        parse("category X\nobject A\ncompose f f = id_A\n")


def test_document_must_start_with_category():
    with pytest.raises(DocumentSyntaxError):
        parse("object A\n")


def test_normalize_drops_comments():
    assert normalize(ARROW) == "category Arrow\nobject A\nobject B\nmorphism f : A -> B\n"


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_files_are_normalized(fixture_dir, name):
    path = fixture_dir / f"{name.lower()}.cat"
    text = path.read_text(encoding="utf-8")
    assert serialize(parse(text)) == normalize(text) == text
    assert load_category(text).same_table(fixture(name))


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_from_category_round_trips(name):
    C = fixture(name)
    assert load_category(serialize(from_category(C))).same_table(C)


def test_species_section(fixture_dir):
    doc = read_document(fixture_dir / "arrow_species.cat")
    sigma = validate_species(build_species(doc))
    assert sigma.orders["A"].leq("lo", "hi")
    assert realize(sigma).total.objects == ("(A,lo)", "(B,lo)", "(B,hi)")
    assert normalize(serialize(doc)) == serialize(doc)


def test_species_lines_need_a_section():
    with pytest.raises(DocumentSyntaxError):
        parse("category X\nobject A\norder A : p\n")


def test_large_orders_are_refused(monkeypatch):
    monkeypatch.setenv("SPECAT_MAX_ORDER", "2")
    doc = parse("category X\nobject A\nspecies S\norder A : p q r\n")
    with pytest.raises(PayloadTooLarge):
        build_species(doc)
