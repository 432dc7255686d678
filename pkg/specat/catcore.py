"""Finite categories as explicit composition tables, plus their structural primitives."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from .errors import (
    DanglingEndpoint,
    DuplicateId,
    LawViolation,
    NonTotalComposition,
    RelationNotReflexiveTransitive,
    UnknownMorphism,
    UnknownObject,
)

ObjId = str
MorId = str


def identity_name(obj: ObjId) -> MorId:
    return f"id_{obj}"


@dataclass(frozen=True)
class CategoryDescription:
    """Unvalidated input: identities are implicit and completed on validation."""

    name: str
    objects: Tuple[ObjId, ...]
    morphisms: Tuple[Tuple[MorId, ObjId, ObjId], ...]
    compositions: Tuple[Tuple[MorId, MorId, MorId], ...] = ()


@dataclass(frozen=True)
class FiniteCategory:
    name: str
    objects: Tuple[ObjId, ...]
    morphisms: Tuple[MorId, ...]
    dom: Mapping[MorId, ObjId]
    cod: Mapping[MorId, ObjId]
    identity: Mapping[ObjId, MorId]
    table: Mapping[Tuple[MorId, MorId], MorId]

    def compose(self, g: MorId, f: MorId) -> MorId:
        """Return ``g ∘ f``."""

        try:
            return self.table[(g, f)]
        except KeyError as exc:
            raise NonTotalComposition(f"{g} ∘ {f} is not defined in {self.name}") from exc

    def hom(self, a: ObjId, b: ObjId) -> Tuple[MorId, ...]:
        return self._homs.get((a, b), ())

    @cached_property
    def _homs(self) -> Dict[Tuple[ObjId, ObjId], Tuple[MorId, ...]]:
        homs: Dict[Tuple[ObjId, ObjId], List[MorId]] = {}
        for m in self.morphisms:
            homs.setdefault((self.dom[m], self.cod[m]), []).append(m)
        return {key: tuple(value) for key, value in homs.items()}

    @cached_property
    def _inverses(self) -> Dict[MorId, MorId]:
        inverses: Dict[MorId, MorId] = {}
        for m in self.morphisms:
            a, b = self.dom[m], self.cod[m]
            for n in self.hom(b, a):
                if self.table[(n, m)] == self.identity[a] and self.table[(m, n)] == self.identity[b]:
                    inverses[m] = n
                    break
        return inverses

    def is_identity(self, m: MorId) -> bool:
        return self.identity[self.dom[m]] == m

    def same_table(self, other: "FiniteCategory") -> bool:
        return (
            set(self.objects) == set(other.objects)
            and set(self.morphisms) == set(other.morphisms)
            and dict(self.dom) == dict(other.dom)
            and dict(self.cod) == dict(other.cod)
            and dict(self.identity) == dict(other.identity)
            and dict(self.table) == dict(other.table)
        )

    def describe(self) -> CategoryDescription:
        """Inverse of :func:`validate_category`, omitting identities."""

        identities = set(self.identity.values())
        morphisms = tuple((m, self.dom[m], self.cod[m]) for m in self.morphisms if m not in identities)
        compositions = tuple(
            (g, f, h)
            for (g, f), h in sorted(self.table.items())
            if g not in identities and f not in identities
        )
        return CategoryDescription(self.name, tuple(self.objects), morphisms, compositions)


@dataclass(frozen=True)
class Subcategory:
    parent: FiniteCategory
    objects: FrozenSet[ObjId]
    morphisms: FrozenSet[MorId]

    def as_category(self, name: Optional[str] = None) -> FiniteCategory:
        return _restrict(self.parent, self.objects, self.morphisms, name or f"{self.parent.name}|sub")


@dataclass(frozen=True)
class FunctorData:
    """A map of finite categories; laws are checked by ``functcore.validate_functor``."""

    source: FiniteCategory
    target: FiniteCategory
    object_map: Mapping[ObjId, ObjId]
    morphism_map: Mapping[MorId, MorId]

    def __call__(self, item: str) -> str:
        if item in self.object_map:
            return self.object_map[item]
        return self.morphism_map[item]


@dataclass(frozen=True)
class OrderedSet:
    carrier: Tuple[str, ...]
    relation: FrozenSet[Tuple[str, str]]

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.relation


@dataclass(frozen=True)
class GroupTable:
    elements: Tuple[str, ...]
    identity: str
    product: Mapping[Tuple[str, str], str] = field(default_factory=dict)

    def multiply(self, a: str, b: str) -> str:
        return self.product[(a, b)]

    def inverse(self, a: str) -> str:
        for b in self.elements:
            if self.product[(a, b)] == self.identity:
                return b
        raise LawViolation(f"{a} has no inverse")

    @property
    def order(self) -> int:
        return len(self.elements)


def _restrict(C: FiniteCategory, objects: Iterable[ObjId], morphisms: Iterable[MorId], name: str) -> FiniteCategory:
    obj_set = set(objects)
    mor_set = set(morphisms)
    return FiniteCategory(
        name=name,
        objects=tuple(o for o in C.objects if o in obj_set),
        morphisms=tuple(m for m in C.morphisms if m in mor_set),
        dom={m: C.dom[m] for m in mor_set},
        cod={m: C.cod[m] for m in mor_set},
        identity={o: C.identity[o] for o in obj_set},
        table={(g, f): h for (g, f), h in C.table.items() if g in mor_set and f in mor_set},
    )


def build_category(
    name: str,
    objects: Sequence[ObjId],
    morphisms: Mapping[MorId, Tuple[ObjId, ObjId]],
    table: Mapping[Tuple[MorId, MorId], MorId],
    identity: Mapping[ObjId, MorId],
) -> FiniteCategory:
    """Assemble a category from complete tables without checking the laws."""

    return FiniteCategory(
        name=name,
        objects=tuple(objects),
        morphisms=tuple(morphisms),
        dom={m: ends[0] for m, ends in morphisms.items()},
        cod={m: ends[1] for m, ends in morphisms.items()},
        identity=dict(identity),
        table=dict(table),
    )


def check_laws(C: FiniteCategory) -> List[str]:
    """List every composability, identity and associativity violation of ``C``."""

    violations: List[str] = []
    for a in C.objects:
        i = C.identity.get(a)
        if i is None or C.dom.get(i) != a or C.cod.get(i) != a:
            violations.append(f"identity of {a} is missing or has wrong endpoints")
    if violations:
        return violations

    for f in C.morphisms:
        for g in C.morphisms:
            key = (g, f)
            if C.cod[f] == C.dom[g]:
                h = C.table.get(key)
                if h is None:
                    violations.append(f"missing composite {g} ∘ {f}")
                elif C.dom.get(h) != C.dom[f] or C.cod.get(h) != C.cod[g]:
                    violations.append(f"composite {g} ∘ {f} = {h} has wrong endpoints")
            elif key in C.table:
                violations.append(f"composite {g} ∘ {f} defined on a non-composable pair")
    if violations:
        return violations

    for f in C.morphisms:
        a, b = C.dom[f], C.cod[f]
        if C.table[(C.identity[b], f)] != f or C.table[(f, C.identity[a])] != f:
            violations.append(f"identity law fails at {f}")
    for f in C.morphisms:
        for g in C.morphisms:
            if C.cod[f] != C.dom[g]:
                continue
            gf = C.table[(g, f)]
            for h in C.morphisms:
                if C.dom[h] != C.cod[g]:
                    continue
                if C.table[(h, gf)] != C.table[(C.table[(h, g)], f)]:
                    violations.append(f"associativity fails at ({h}, {g}, {f})")
    return violations


def validate_category(raw: CategoryDescription) -> FiniteCategory:
    """Complete identities, check totality and laws, and return the category.

    Structural problems raise the specific error; law failures raise
    :class:`LawViolation` whose ``violations`` names every offending triple.
    """

    seen_objects: Set[ObjId] = set()
    for obj in raw.objects:
        if obj in seen_objects:
            raise DuplicateId(f"object {obj} declared twice")
        seen_objects.add(obj)

    ends: Dict[MorId, Tuple[ObjId, ObjId]] = {}
    identity = {obj: identity_name(obj) for obj in raw.objects}
    for obj, i in identity.items():
        ends[i] = (obj, obj)
    for mor, source, target in raw.morphisms:
        if mor in ends or mor in seen_objects:
            raise DuplicateId(f"morphism {mor} declared twice or clashes with an identifier")
        for endpoint in (source, target):
            if endpoint not in seen_objects:
                raise DanglingEndpoint(f"morphism {mor} refers to unknown object {endpoint}")
        ends[mor] = (source, target)

    table: Dict[Tuple[MorId, MorId], MorId] = {}
    for g, f, h in raw.compositions:
        for mor in (g, f, h):
            if mor not in ends:
                raise UnknownMorphism(f"composition {g} ∘ {f} = {h} uses unknown morphism {mor}")
        if ends[f][1] != ends[g][0]:
            raise NonTotalComposition(f"{g} ∘ {f} declared but {f} and {g} are not composable")
        if (g, f) in table and table[(g, f)] != h:
            raise DuplicateId(f"composite {g} ∘ {f} declared twice with different results")
        table[(g, f)] = h

    violations: List[str] = []
    for mor, (source, target) in ends.items():
        for key, expected in (((identity[target], mor), mor), ((mor, identity[source]), mor)):
            declared = table.setdefault(key, expected)
            if declared != expected:
                violations.append(f"identity law fails: {key[0]} ∘ {key[1]} declared as {declared}")
    if violations:
        raise LawViolation(f"{raw.name}: {len(violations)} law violation(s)", violations)

    missing = [
        f"{g} ∘ {f}"
        for f in ends
        for g in ends
        if ends[f][1] == ends[g][0] and (g, f) not in table
    ]
    if missing:
        raise NonTotalComposition(f"{raw.name}: missing composites {', '.join(sorted(missing))}")

    category = build_category(raw.name, raw.objects, ends, table, identity)
    violations = check_laws(category)
    if violations:
        raise LawViolation(f"{raw.name}: {len(violations)} law violation(s)", violations)
    logging.debug("Validated %s with %d object(s) and %d morphism(s)", raw.name, len(category.objects), len(category.morphisms))
    return category


def _require_object(C: FiniteCategory, obj: ObjId) -> None:
    if obj not in C.identity:
        raise UnknownObject(f"{obj} is not an object of {C.name}")


def _require_morphism(C: FiniteCategory, mor: MorId) -> None:
    if mor not in C.dom:
        raise UnknownMorphism(f"{mor} is not a morphism of {C.name}")


def opposite(C: FiniteCategory) -> FiniteCategory:
    name = C.name[: -len("^op")] if C.name.endswith("^op") else f"{C.name}^op"
    return FiniteCategory(
        name=name,
        objects=C.objects,
        morphisms=C.morphisms,
        dom=dict(C.cod),
        cod=dict(C.dom),
        identity=dict(C.identity),
        table={(f, g): h for (g, f), h in C.table.items()},
    )


def inverse_of(C: FiniteCategory, m: MorId) -> Optional[MorId]:
    _require_morphism(C, m)
    return C._inverses.get(m)


def is_isomorphism(C: FiniteCategory, m: MorId) -> bool:
    return inverse_of(C, m) is not None


def mor_brace(C: FiniteCategory, a: ObjId, b: ObjId) -> FrozenSet[MorId]:
    _require_object(C, a)
    _require_object(C, b)
    return frozenset(C.hom(a, b)) | frozenset(C.hom(b, a))


def mor_brace_noninv(C: FiniteCategory, a: ObjId, b: ObjId) -> FrozenSet[MorId]:
    return frozenset(m for m in mor_brace(C, a, b) if not is_isomorphism(C, m))


def _sorted_blocks(blocks: Iterable[Iterable[ObjId]]) -> List[FrozenSet[ObjId]]:
    return sorted((frozenset(block) for block in blocks), key=lambda block: min(block))


def connected_components(C: FiniteCategory) -> List[FrozenSet[ObjId]]:
    graph = nx.Graph()
    graph.add_nodes_from(C.objects)
    graph.add_edges_from((C.dom[m], C.cod[m]) for m in C.morphisms)
    return _sorted_blocks(nx.connected_components(graph))


def is_connected(C: FiniteCategory) -> bool:
    return len(C.objects) > 0 and len(connected_components(C)) == 1


def _iso_graph(C: FiniteCategory) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(C.objects)
    graph.add_edges_from((C.dom[m], C.cod[m]) for m in C.morphisms if is_isomorphism(C, m))
    return graph


def isomorphism_classes(C: FiniteCategory) -> List[FrozenSet[ObjId]]:
    return _sorted_blocks(nx.connected_components(_iso_graph(C)))


def groupoid_component(C: FiniteCategory, e: ObjId) -> Subcategory:
    """The maximal connected groupoid in ``C`` containing ``e``."""

    _require_object(C, e)
    objects = frozenset(nx.node_connected_component(_iso_graph(C), e))
    morphisms = frozenset(
        m for m in C.morphisms if C.dom[m] in objects and C.cod[m] in objects and is_isomorphism(C, m)
    )
    return Subcategory(C, objects, morphisms)


def maximal_groupoids(C: FiniteCategory) -> List[Subcategory]:
    return [groupoid_component(C, min(block)) for block in isomorphism_classes(C)]


def full_subcategory(C: FiniteCategory, objects: Iterable[ObjId], name: Optional[str] = None) -> FiniteCategory:
    keep = set(objects)
    for obj in keep:
        _require_object(C, obj)
    morphisms = [m for m in C.morphisms if C.dom[m] in keep and C.cod[m] in keep]
    return _restrict(C, keep, morphisms, name or f"{C.name}|full")


def skeleton(C: FiniteCategory) -> Tuple[FiniteCategory, FunctorData]:
    """Full subcategory on the least-named object of each isomorphism class."""

    representatives = [min(block) for block in isomorphism_classes(C)]
    if len(representatives) == len(C.objects):
        sk = C
    else:
        sk = full_subcategory(C, representatives, name=f"{C.name}|skel")
    inclusion = FunctorData(
        source=sk,
        target=C,
        object_map={o: o for o in sk.objects},
        morphism_map={m: m for m in sk.morphisms},
    )
    return sk, inclusion


def is_initial(C: FiniteCategory, a: ObjId) -> bool:
    return all(len(C.hom(a, b)) == 1 for b in C.objects)


def is_monomorphism(C: FiniteCategory, m: MorId) -> bool:
    """Left-cancellation of ``m`` against every pair of parallel morphisms."""

    _require_morphism(C, m)
    source = C.dom[m]
    for c in C.objects:
        images: Set[MorId] = set()
        incoming = C.hom(c, source)
        for g in incoming:
            images.add(C.table[(m, g)])
        if len(images) != len(incoming):
            return False
    return True


def minimal_objects(C: FiniteCategory) -> FrozenSet[ObjId]:
    initial = {a for a in C.objects if is_initial(C, a)}
    minimal = set()
    for a in C.objects:
        if a in initial:
            continue
        if all(
            is_isomorphism(C, m)
            for b in C.objects
            if b not in initial
            for m in C.hom(b, a)
            if is_monomorphism(C, m)
        ):
            minimal.add(a)
    return frozenset(minimal)


def dis(points: Iterable[str], name: str = "Dis") -> FiniteCategory:
    objects = tuple(points)
    identity = {o: identity_name(o) for o in objects}
    return build_category(
        name,
        objects,
        {i: (o, o) for o, i in identity.items()},
        {(i, i): i for i in identity.values()},
        identity,
    )


def disjoint_union(C: FiniteCategory, D: FiniteCategory, name: Optional[str] = None, tags: Tuple[str, str] = ("0", "1")) -> FiniteCategory:
    """Coproduct of categories; identifiers are prefixed with ``tag:``."""

    objects: List[ObjId] = []
    morphisms: Dict[MorId, Tuple[ObjId, ObjId]] = {}
    table: Dict[Tuple[MorId, MorId], MorId] = {}
    identity: Dict[ObjId, MorId] = {}
    for tag, part in zip(tags, (C, D)):
        objects.extend(f"{tag}:{o}" for o in part.objects)
        for m in part.morphisms:
            morphisms[f"{tag}:{m}"] = (f"{tag}:{part.dom[m]}", f"{tag}:{part.cod[m]}")
        for (g, f), h in part.table.items():
            table[(f"{tag}:{g}", f"{tag}:{f}")] = f"{tag}:{h}"
        for o, i in part.identity.items():
            identity[f"{tag}:{o}"] = f"{tag}:{i}"
    return build_category(name or f"{C.name}+{D.name}", objects, morphisms, table, identity)


def is_preorder(C: FiniteCategory) -> bool:
    return all(len(C.hom(a, b)) <= 1 for a in C.objects for b in C.objects)


def is_order(C: FiniteCategory) -> bool:
    """A preorder whose only isomorphisms are identities."""

    return is_preorder(C) and all(C.is_identity(m) for m in C.morphisms if is_isomorphism(C, m))


def make_ordered_set(carrier: Iterable[str], pairs: Iterable[Tuple[str, str]], close: bool = False) -> OrderedSet:
    """Build an order from ``a < b`` pairs; ``close`` adds reflexive-transitive closure."""

    points = tuple(dict.fromkeys(carrier))
    relation = set(pairs)
    for a, b in relation:
        if a not in points or b not in points:
            raise RelationNotReflexiveTransitive(f"pair ({a}, {b}) leaves the carrier")
    if close:
        graph = nx.DiGraph()
        graph.add_nodes_from(points)
        graph.add_edges_from(relation)
        relation = {(a, b) for a in points for b in nx.descendants(graph, a) | {a}}
    for a in points:
        if (a, a) not in relation:
            raise RelationNotReflexiveTransitive(f"relation is not reflexive at {a}")
    for (a, b), (c, d) in itertools.product(relation, repeat=2):
        if b == c and (a, d) not in relation:
            raise RelationNotReflexiveTransitive(f"relation is not transitive at {a} < {b} < {d}")
    for a, b in relation:
        if a != b and (b, a) in relation:
            raise LawViolation(f"relation is not antisymmetric at {a}, {b}")
    return OrderedSet(points, frozenset(relation))


def order_from_relation(points: Iterable[str], pairs: Iterable[Tuple[str, str]], name: str = "Order") -> FiniteCategory:
    """The category ``T^⊥``: one morphism ``a -> b`` precisely when ``a < b``."""

    carrier = tuple(dict.fromkeys(points))
    relation = set(pairs)
    for a in carrier:
        if (a, a) not in relation:
            raise RelationNotReflexiveTransitive(f"relation is not reflexive at {a}")
    for (a, b), (c, d) in itertools.product(relation, repeat=2):
        if b == c and (a, d) not in relation:
            raise RelationNotReflexiveTransitive(f"relation is not transitive at {a} < {b} < {d}")

    def arrow(a: str, b: str) -> MorId:
        return identity_name(a) if a == b else f"{a}<{b}"

    morphisms = {arrow(a, b): (a, b) for a, b in relation}
    table = {
        (arrow(b, c), arrow(a, b)): arrow(a, c)
        for a, b in relation
        for b2, c in relation
        if b == b2
    }
    return build_category(name, carrier, morphisms, table, {a: arrow(a, a) for a in carrier})


def automorphism_group(C: FiniteCategory, e: ObjId) -> GroupTable:
    _require_object(C, e)
    elements = tuple(m for m in C.hom(e, e) if is_isomorphism(C, m))
    product = {(a, b): C.table[(a, b)] for a in elements for b in elements}
    return GroupTable(elements=elements, identity=C.identity[e], product=product)
