"""Line-oriented category documents: parsing, serialization and loading."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .catcore import CategoryDescription, FiniteCategory, identity_name, make_ordered_set, validate_category
from .config import get_settings
from .errors import DocumentSyntaxError, PayloadTooLarge, SemanticError
from .species import StructureSpecies

_TOKEN = re.compile(r"\S+")
_CATEGORY_DIRECTIVES = ("category", "object", "morphism", "compose")
_SPECIES_DIRECTIVES = ("species", "order", "rel", "select", "emap")


@dataclass
class SpeciesSection:
    name: str
    orders: Dict[str, List[str]] = field(default_factory=dict)
    relations: Dict[str, List[Tuple[str, str]]] = field(default_factory=dict)
    selected: Dict[str, List[str]] = field(default_factory=dict)
    emaps: Dict[str, Dict[str, str]] = field(default_factory=dict)


@dataclass
class CategoryDocument:
    name: str
    objects: List[str] = field(default_factory=list)
    morphisms: List[Tuple[str, str, str]] = field(default_factory=list)
    compositions: List[Tuple[str, str, str]] = field(default_factory=list)
    species: Optional[SpeciesSection] = None

    def description(self) -> CategoryDescription:
        return CategoryDescription(self.name, tuple(self.objects), tuple(self.morphisms), tuple(self.compositions))


def _expect(tokens: List[Tuple[str, int]], line: int, shape: str, size: Optional[int] = None, minimum: int = 0, marks: Optional[Dict[int, str]] = None) -> None:
    if (size is not None and len(tokens) != size) or len(tokens) < minimum:
        column = tokens[min(len(tokens), size or minimum) - 1][1] if tokens else 1
        raise DocumentSyntaxError(f"expected `{shape}`", line, column)
    for index, mark in (marks or {}).items():
        if tokens[index][0] != mark:
            raise DocumentSyntaxError(f"expected `{mark}` in `{shape}`", line, tokens[index][1])


def parse(text: str) -> CategoryDocument:
    """Parse a document; identities ``id_<object>`` are implicit and may be referenced."""

    doc: Optional[CategoryDocument] = None
    known_morphisms: Dict[str, Tuple[str, str]] = {}
    composed: Dict[Tuple[str, str], int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(raw.split("#", 1)[0])]
        if not tokens:
            continue
        directive, column = tokens[0]
        if directive not in _CATEGORY_DIRECTIVES + _SPECIES_DIRECTIVES:
            raise DocumentSyntaxError(f"unknown directive `{directive}`", number, column)
        if directive == "category":
            _expect(tokens, number, "category <name>", size=2)
            if doc is not None:
                raise DocumentSyntaxError("a document holds exactly one category", number, column)
            doc = CategoryDocument(tokens[1][0])
            continue
        if doc is None:
            raise DocumentSyntaxError("document must start with `category <name>`", number, column)
        values = [t for t, _c in tokens]

        if directive == "object":
            _expect(tokens, number, "object <ident>", size=2)
            doc.objects.append(values[1])
            known_morphisms[identity_name(values[1])] = (values[1], values[1])
        elif directive == "morphism":
            _expect(tokens, number, "morphism <ident> : <ident> -> <ident>", size=6, marks={2: ":", 4: "->"})
            for endpoint in (values[3], values[5]):
                if endpoint not in doc.objects:
                    raise SemanticError(f"unknown object {endpoint}", number)
            doc.morphisms.append((values[1], values[3], values[5]))
            known_morphisms[values[1]] = (values[3], values[5])
        elif directive == "compose":
            _expect(tokens, number, "compose <g> <f> = <h>", size=5, marks={3: "="})
            g, f, h = values[1], values[2], values[4]
            for mor in (g, f, h):
                if mor not in known_morphisms:
                    raise SemanticError(f"unknown morphism {mor}", number)
            if (g, f) in composed:
                raise SemanticError(f"{g} ∘ {f} already composed on line {composed[(g, f)]}", number)
            composed[(g, f)] = number
            doc.compositions.append((g, f, h))
        elif directive == "species":
            _expect(tokens, number, "species <name>", size=2)
            if doc.species is not None:
                raise DocumentSyntaxError("a document holds at most one species", number, column)
            doc.species = SpeciesSection(values[1])
        else:
            _species_line(doc, directive, tokens, values, number, known_morphisms)
    if doc is None:
        raise DocumentSyntaxError("empty document", 1, 1)
    return doc


def _species_line(
    doc: CategoryDocument,
    directive: str,
    tokens: List[Tuple[str, int]],
    values: List[str],
    number: int,
    known_morphisms: Dict[str, Tuple[str, str]],
) -> None:
    species = doc.species
    if species is None:
        raise DocumentSyntaxError(f"`{directive}` outside a species section", number, tokens[0][1])
    if directive == "emap":
        _expect(tokens, number, "emap <mor> : <elem> -> <elem>", size=6, marks={2: ":", 4: "->"})
        if values[1] not in known_morphisms:
            raise SemanticError(f"unknown morphism {values[1]}", number)
        species.emaps.setdefault(values[1], {})[values[3]] = values[5]
        return
    if values[1] not in doc.objects:
        raise SemanticError(f"unknown object {values[1]}", number)
    if directive == "order":
        _expect(tokens, number, "order <obj> : <elem> ...", minimum=3, marks={2: ":"})
        species.orders.setdefault(values[1], []).extend(values[3:])
    elif directive == "rel":
        _expect(tokens, number, "rel <obj> : <elem> < <elem>", size=6, marks={2: ":", 4: "<"})
        carrier = species.orders.get(values[1], [])
        for elem in (values[3], values[5]):
            if elem not in carrier:
                raise SemanticError(f"{elem} is not in the order of {values[1]}", number)
        species.relations.setdefault(values[1], []).append((values[3], values[5]))
    else:
        _expect(tokens, number, "select <obj> : <elem> ...", minimum=3, marks={2: ":"})
        species.selected.setdefault(values[1], []).extend(values[3:])


def serialize(doc: CategoryDocument) -> str:
    lines = [f"category {doc.name}"]
    lines.extend(f"object {o}" for o in doc.objects)
    lines.extend(f"morphism {m} : {a} -> {b}" for m, a, b in doc.morphisms)
    lines.extend(f"compose {g} {f} = {h}" for g, f, h in doc.compositions)
    species = doc.species
    if species is not None:
        lines.append(f"species {species.name}")
        for obj, carrier in species.orders.items():
            lines.append(f"order {obj} : {' '.join(carrier)}")
            lines.extend(f"rel {obj} : {a} < {b}" for a, b in species.relations.get(obj, []))
        for obj, chosen in species.selected.items():
            lines.append(f"select {obj} : {' '.join(chosen)}")
        for mor, mapping in species.emaps.items():
            lines.extend(f"emap {mor} : {x} -> {y}" for x, y in mapping.items())
    return "\n".join(lines) + "\n"


def normalize(text: str) -> str:
    return serialize(parse(text))


def from_category(C: FiniteCategory) -> CategoryDocument:
    """A document for ``C``; identities are renamed to ``id_<object>``."""

    rename = {i: identity_name(o) for o, i in C.identity.items()}
    raw = C.describe()
    return CategoryDocument(
        name=raw.name,
        objects=list(raw.objects),
        morphisms=list(raw.morphisms),
        compositions=[(g, f, rename.get(h, h)) for g, f, h in raw.compositions],
    )


def load_category(text: str) -> FiniteCategory:
    return validate_category(parse(text).description())


def read_document(path: Path) -> CategoryDocument:
    return parse(Path(path).read_text(encoding="utf-8"))


def build_species(doc: CategoryDocument, C: Optional[FiniteCategory] = None) -> StructureSpecies:
    """The species section over the document's category; orders are closed reflexively and transitively."""

    if doc.species is None:
        raise SemanticError(f"document {doc.name} has no species section")
    C = C or validate_category(doc.description())
    section = doc.species
    limit = get_settings().max_order
    orders = {}
    for obj in C.objects:
        carrier = section.orders.get(obj, [])
        if len(carrier) > limit:
            raise PayloadTooLarge(f"order of {obj} has {len(carrier)} element(s); at most {limit} are supported")
        pairs = [(x, x) for x in carrier] + section.relations.get(obj, [])
        orders[obj] = make_ordered_set(carrier, pairs, close=True)
    return StructureSpecies(
        base=C,
        orders=orders,
        emaps={mor: dict(mapping) for mor, mapping in section.emaps.items()},
        structures={obj: tuple(chosen) for obj, chosen in section.selected.items()},
        name=section.name,
    )
