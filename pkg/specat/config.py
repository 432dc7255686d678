"""Configuration helpers for the finite category toolkit."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Optional


def _env(name: str, default: Optional[str] = None) -> Optional[str]:
    value = os.getenv(name)
    return value if value not in (None, "") else default


def _int_env(name: str, default: str) -> Callable[[], int]:
    return lambda: int(_env(name, default))


@dataclass(frozen=True)
class Settings:
    """Runtime bounds for searches, reconstruction and corpus generation."""

    budget: int = field(default_factory=_int_env("SPECAT_BUDGET", "10000000"))  # Search nodes.
    max_objects: int = field(default_factory=_int_env("SPECAT_MAX_OBJECTS", "8"))
    max_morphisms: int = field(default_factory=_int_env("SPECAT_MAX_MORPHISMS", "40"))
    seed: int = field(default_factory=_int_env("SPECAT_SEED", "0"))
    max_order: int = field(default_factory=_int_env("SPECAT_MAX_ORDER", "64"))
    max_topology_points: int = field(default_factory=_int_env("SPECAT_MAX_TOPOLOGY_POINTS", "3"))


def get_settings() -> Settings:
    """Return the active configuration, re-reading the environment."""

    return Settings()
