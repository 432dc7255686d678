"""Finite categories, structure species, constructive functors and reconstruction from them."""

from .catcore import FiniteCategory, FunctorData, opposite, skeleton, validate_category  # noqa: F401
from .catover import compare_strict, roundtrip_strict  # noqa: F401
from .constructive import ConstructiveFunctor, is_constructive, point_cover  # noqa: F401
from .docfile import load_category, parse, serialize  # noqa: F401
from .errors import SpecatError  # noqa: F401
from .reconstruct import build_fragment, compare, roundtrip  # noqa: F401
from .species import StructureSpecies, realize, topology_species  # noqa: F401
