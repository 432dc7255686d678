"""Shared fixtures for the test-suite."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

# Ensure project root is on the path when running from the scripts directory.
CURRENT_DIR = Path(__file__).resolve().parent
PROJECT_ROOT = CURRENT_DIR.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from specat.corpus import fixture  # noqa: E402
from specat.docfile import load_category  # noqa: E402

FIXTURE_DIR = PROJECT_ROOT / "data" / "fixtures"


@pytest.fixture
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture
def arrow():
    return fixture("Arrow")


@pytest.fixture
def z2():
    return fixture("Z2")


@pytest.fixture
def iso2():
    return fixture("Iso2")


@pytest.fixture
def chain3():
    return fixture("Chain3")


@pytest.fixture(scope="session")
def twisted_pair():
    return load_category((FIXTURE_DIR / "twisted_pair.cat").read_text())
