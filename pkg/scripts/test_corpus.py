from __future__ import annotations

import itertools

import pytest

from generate_corpus import main as write_corpus
from specat.catcore import check_laws, is_connected
from specat.corpus import FIXTURES, canonical_form, fixture, fixtures, generate_corpus, hom_profiles
from specat.docfile import load_category
from specat.errors import BoundsTooLarge
from specat.functcore import find_isomorphism


def _contains(corpus, C) -> bool:
    return any(find_isomorphism(C, D) is not None for D in corpus)


def test_fixtures_come_first():
    corpus = list(generate_corpus(max_objects=1, max_morphisms=1))
    assert [C.name for C in corpus[: len(FIXTURES)]] == list(FIXTURES)
    assert len(corpus) >= len(FIXTURES)


def test_monoids_with_few_elements():
    corpus = list(generate_corpus(max_objects=1, max_morphisms=2, include_fixtures=False))
    assert _contains(corpus, fixture("One"))
    assert _contains(corpus, fixture("Z2"))
    assert all(len(C.objects) == 1 for C in corpus)


def test_generated_categories_are_valid_connected_and_distinct():
    corpus = list(generate_corpus(max_objects=2, max_morphisms=2, include_fixtures=False))
    for C in corpus:
        assert not check_laws(C)
        assert is_connected(C)
    for C, D in itertools.combinations(corpus, 2):
        assert find_isomorphism(C, D) is None
    assert _contains(corpus, fixture("Arrow"))
    assert _contains(corpus, fixture("Iso2"))


def test_profiles_are_deduplicated_under_relabelling():
    assert len(list(hom_profiles(2, 1))) == 1
    assert len(list(hom_profiles(1, 0))) == 1


def test_bounds_are_enforced():
    with pytest.raises(BoundsTooLarge):
        list(generate_corpus(max_objects=4))
    with pytest.raises(BoundsTooLarge):
        list(generate_corpus(max_morphisms=9))
    with pytest.raises(BoundsTooLarge):
        list(generate_corpus(mode="sideways"))


def test_random_mode_is_deterministic_per_seed():
    first = list(generate_corpus(mode="random", seed=4, samples=6, include_fixtures=False))
    second = list(generate_corpus(mode="random", seed=4, samples=6, include_fixtures=False))
    assert [C.name for C in first] == [C.name for C in second]
    assert all(C.same_table(D) for C, D in zip(first, second))


def test_corpus_script_writes_documents(tmp_path, capsys):
    assert write_corpus(["--out", str(tmp_path), "--max-objects", "1", "--max-morphisms", "1", "--no-fixtures"]) == 0
    written = sorted(p.name for p in tmp_path.glob("*.cat"))
    assert written == ["Gen0.cat", "Gen1.cat", "Gen2.cat"]
    assert "Corpus complete." in capsys.readouterr().out
    assert write_corpus(["--out", str(tmp_path), "--max-objects", "5"]) == 2


def test_monoid_counts_match_isomorphism_classes():
    # Monoids of order 1, 2, 3 and 4 number 1, 2, 7 and 35 up to isomorphism.
    assert len(list(generate_corpus(max_objects=1, max_morphisms=2, include_fixtures=False))) == 10
    assert len(list(generate_corpus(max_objects=1, max_morphisms=3, include_fixtures=False))) == 45


RELABELLED_CHAIN3X = """\
category Renamed
object z
object y
object x
morphism p : z -> y
morphism q : y -> x
morphism r : z -> x
morphism s : z -> x
compose q p = s
"""


def test_canonical_form_ignores_names():
    assert canonical_form(load_category(RELABELLED_CHAIN3X)) == canonical_form(fixture("Chain3X"))
    assert canonical_form(fixture("Cospan")) != canonical_form(fixture("Span"))
    assert canonical_form(fixture("Par2")) != canonical_form(fixture("Arrow"))


def test_canonical_form_agrees_with_isomorphism_search():
    corpus = list(fixtures().values()) + list(generate_corpus(max_objects=2, max_morphisms=2, include_fixtures=False))
    for C, D in itertools.combinations(corpus, 2):
        assert (canonical_form(C) == canonical_form(D)) == (find_isomorphism(C, D) is not None)


def test_unreachable_bounds_fail_before_searching():
    with pytest.raises(BoundsTooLarge, match="--mode random"):
        next(generate_corpus(max_objects=1, max_morphisms=5, include_fixtures=False))


def test_exhausted_budget_names_the_profile():
    with pytest.raises(BoundsTooLarge, match="search nodes"):
        list(generate_corpus(max_objects=1, max_morphisms=3, include_fixtures=False, budget=5))
