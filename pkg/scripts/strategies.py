"""Hypothesis strategies drawing small finite categories."""

from __future__ import annotations

from hypothesis import strategies as st

from specat.corpus import FIXTURES, fixture, generate_corpus

_SMALL = list(generate_corpus(max_objects=2, max_morphisms=2, include_fixtures=False))


def fixture_names() -> st.SearchStrategy[str]:
    return st.sampled_from(sorted(FIXTURES))


def fixtures():
    return fixture_names().map(fixture)


def small_categories():
    """Fixtures and every connected category with at most two objects and two non-identity morphisms."""

    return st.one_of(fixtures(), st.sampled_from(_SMALL))
