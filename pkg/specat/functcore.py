"""Functors, natural transformations and the brute-force search oracles."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .catcore import (
    FiniteCategory,
    FunctorData,
    GroupTable,
    MorId,
    ObjId,
    is_isomorphism,
    opposite,
    skeleton,
)
from .config import get_settings
from .errors import FunctorLawViolation, LawViolation, SearchBudgetExceeded

__all__ = [
    "FunctorData",
    "NaturalTransformationData",
    "are_equivalent",
    "compose_functors",
    "enumerate_functors",
    "equivalence_witness",
    "find_group_isomorphism",
    "find_isomorphism",
    "functor_violations",
    "identity_functor",
    "is_faithful",
    "is_full",
    "op_functor",
    "validate_functor",
    "validate_natural_transformation",
]


@dataclass(frozen=True)
class NaturalTransformationData:
    source: FunctorData
    target: FunctorData
    components: Mapping[ObjId, MorId]


class _Budget:
    def __init__(self, budget: Optional[int]) -> None:
        self.limit = get_settings().budget if budget is None else budget
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise SearchBudgetExceeded(self.limit)


def functor_violations(F: FunctorData) -> List[str]:
    C, D = F.source, F.target
    violations: List[str] = []
    for a in C.objects:
        if F.object_map.get(a) not in D.identity:
            violations.append(f"object {a} has no image in {D.name}")
    for m in C.morphisms:
        if F.morphism_map.get(m) not in D.dom:
            violations.append(f"morphism {m} has no image in {D.name}")
    if violations:
        return violations
    for m in C.morphisms:
        image = F.morphism_map[m]
        if D.dom[image] != F.object_map[C.dom[m]] or D.cod[image] != F.object_map[C.cod[m]]:
            violations.append(f"endpoints of {m} are not preserved by its image {image}")
    for a in C.objects:
        if F.morphism_map[C.identity[a]] != D.identity[F.object_map[a]]:
            violations.append(f"identity of {a} is not preserved")
    if violations:
        return violations
    for (g, f), h in C.table.items():
        if D.table[(F.morphism_map[g], F.morphism_map[f])] != F.morphism_map[h]:
            violations.append(f"composition {g} ∘ {f} = {h} is not preserved")
    return violations


def validate_functor(F: FunctorData) -> FunctorData:
    violations = functor_violations(F)
    if violations:
        raise FunctorLawViolation(f"not a functor {F.source.name} -> {F.target.name}: {violations[0]}", violations)
    return F


def identity_functor(C: FiniteCategory) -> FunctorData:
    return FunctorData(C, C, {o: o for o in C.objects}, {m: m for m in C.morphisms})


def compose_functors(G: FunctorData, F: FunctorData) -> FunctorData:
    """Return ``G ∘ F``."""

    return FunctorData(
        F.source,
        G.target,
        {o: G.object_map[F.object_map[o]] for o in F.source.objects},
        {m: G.morphism_map[F.morphism_map[m]] for m in F.source.morphisms},
    )


def _hom_images(F: FunctorData) -> Dict[Tuple[ObjId, ObjId], List[MorId]]:
    C = F.source
    images: Dict[Tuple[ObjId, ObjId], List[MorId]] = {}
    for m in C.morphisms:
        images.setdefault((C.dom[m], C.cod[m]), []).append(F.morphism_map[m])
    return images


def is_faithful(F: FunctorData) -> bool:
    return all(len(set(images)) == len(images) for images in _hom_images(F).values())


def is_full(F: FunctorData) -> bool:
    C, D = F.source, F.target
    images = _hom_images(F)
    for a in C.objects:
        for b in C.objects:
            target_hom = D.hom(F.object_map[a], F.object_map[b])
            if set(images.get((a, b), [])) != set(target_hom):
                return False
    return True


def op_functor(F: FunctorData) -> FunctorData:
    return FunctorData(opposite(F.source), opposite(F.target), dict(F.object_map), dict(F.morphism_map))


def validate_natural_transformation(eta: NaturalTransformationData) -> NaturalTransformationData:
    F, G = eta.source, eta.target
    C, D = F.source, F.target
    if G.source is not C and not G.source.same_table(C):
        raise LawViolation("functors of a natural transformation must be parallel")
    for a in C.objects:
        component = eta.components.get(a)
        if component is None or D.dom[component] != F.object_map[a] or D.cod[component] != G.object_map[a]:
            raise LawViolation(f"component at {a} has wrong endpoints", [a])
    for m in C.morphisms:
        a, b = C.dom[m], C.cod[m]
        left = D.table[(eta.components[b], F.morphism_map[m])]
        right = D.table[(G.morphism_map[m], eta.components[a])]
        if left != right:
            raise LawViolation(f"naturality square of {m} does not commute", [m])
    return eta


def _signature(C: FiniteCategory, a: ObjId) -> Tuple:
    out_profile = tuple(sorted(len(C.hom(a, b)) for b in C.objects))
    in_profile = tuple(sorted(len(C.hom(b, a)) for b in C.objects))
    automorphisms = sum(1 for m in C.hom(a, a) if is_isomorphism(C, m))
    return (automorphisms, out_profile, in_profile, len(C.hom(a, a)))


class _MorphismAssignment:
    """Partial morphism map with forced propagation along composites."""

    def __init__(self, C: FiniteCategory, D: FiniteCategory, object_map: Mapping[ObjId, ObjId], injective: bool) -> None:
        self.C, self.D = C, D
        self.object_map = object_map
        self.injective = injective
        self.assigned: Dict[MorId, MorId] = {}
        self.used: Dict[MorId, MorId] = {}

    def _fits(self, m: MorId, image: MorId) -> bool:
        C, D = self.C, self.D
        if D.dom[image] != self.object_map[C.dom[m]] or D.cod[image] != self.object_map[C.cod[m]]:
            return False
        return not (self.injective and image in self.used and self.used[image] != m)

    def assign(self, m: MorId, image: MorId) -> Optional[List[MorId]]:
        """Assign and propagate; returns the assigned keys, or None on conflict."""

        trail: List[MorId] = []
        queue = [(m, image)]
        while queue:
            key, value = queue.pop()
            if key in self.assigned:
                if self.assigned[key] != value:
                    self.undo(trail)
                    return None
                continue
            if not self._fits(key, value):
                self.undo(trail)
                return None
            self.assigned[key] = value
            if self.injective:
                self.used[value] = key
            trail.append(key)
            for other, other_image in list(self.assigned.items()):
                if self.C.cod[key] == self.C.dom[other]:
                    queue.append((self.C.table[(other, key)], self.D.table[(other_image, value)]))
                if self.C.cod[other] == self.C.dom[key]:
                    queue.append((self.C.table[(key, other)], self.D.table[(value, other_image)]))
        return trail

    def undo(self, trail: Sequence[MorId]) -> None:
        for key in trail:
            value = self.assigned.pop(key)
            if self.injective and self.used.get(value) == key:
                del self.used[value]


def _morphism_maps(
    C: FiniteCategory,
    D: FiniteCategory,
    object_map: Mapping[ObjId, ObjId],
    injective: bool,
    budget: _Budget,
) -> Iterator[Dict[MorId, MorId]]:
    state = _MorphismAssignment(C, D, object_map, injective)
    for a in C.objects:
        if state.assign(C.identity[a], D.identity[object_map[a]]) is None:
            return
    order = [m for m in C.morphisms if not C.is_identity(m)]

    def extend(index: int) -> Iterator[Dict[MorId, MorId]]:
        while index < len(order) and order[index] in state.assigned:
            index += 1
        if index == len(order):
            yield dict(state.assigned)
            return
        m = order[index]
        for image in D.hom(object_map[C.dom[m]], object_map[C.cod[m]]):
            budget.tick()
            trail = state.assign(m, image)
            if trail is None:
                continue
            yield from extend(index + 1)
            state.undo(trail)

    yield from extend(0)


def enumerate_functors(C: FiniteCategory, D: FiniteCategory, budget: Optional[int] = None) -> Iterator[FunctorData]:
    """Yield every functor ``C -> D`` once, objects first in declaration order."""

    counter = _Budget(budget)
    for images in itertools.product(D.objects, repeat=len(C.objects)):
        counter.tick()
        object_map = dict(zip(C.objects, images))
        if any(
            not D.hom(object_map[C.dom[m]], object_map[C.cod[m]]) for m in C.morphisms
        ):
            continue
        for morphism_map in _morphism_maps(C, D, object_map, injective=False, budget=counter):
            yield FunctorData(C, D, object_map, morphism_map)


def find_isomorphism(C: FiniteCategory, D: FiniteCategory, budget: Optional[int] = None) -> Optional[FunctorData]:
    """Search an isomorphism of categories ``C -> D`` by pruned backtracking."""

    if len(C.objects) != len(D.objects) or len(C.morphisms) != len(D.morphisms):
        return None
    source_sig = {a: _signature(C, a) for a in C.objects}
    target_sig = {b: _signature(D, b) for b in D.objects}
    if sorted(source_sig.values()) != sorted(target_sig.values()):
        return None

    counter = _Budget(budget)
    order = sorted(C.objects, key=lambda a: (source_sig[a][0], source_sig[a][1], a))
    object_map: Dict[ObjId, ObjId] = {}

    def place(index: int) -> Optional[FunctorData]:
        if index == len(order):
            for morphism_map in _morphism_maps(C, D, object_map, injective=True, budget=counter):
                return FunctorData(C, D, dict(object_map), morphism_map)
            return None
        a = order[index]
        taken = set(object_map.values())
        for b in sorted(D.objects):
            if b in taken or target_sig[b] != source_sig[a]:
                continue
            counter.tick()
            if any(
                len(C.hom(a, c)) != len(D.hom(b, object_map[c])) or len(C.hom(c, a)) != len(D.hom(object_map[c], b))
                for c in object_map
            ):
                continue
            object_map[a] = b
            found = place(index + 1)
            if found is not None:
                return found
            del object_map[a]
        return None

    result = place(0)
    logging.debug("Isomorphism search %s -> %s used %d node(s)", C.name, D.name, counter.used)
    return result


def equivalence_witness(C: FiniteCategory, D: FiniteCategory, budget: Optional[int] = None) -> Optional[FunctorData]:
    """An isomorphism between the skeleta of ``C`` and ``D``, when one exists."""

    return find_isomorphism(skeleton(C)[0], skeleton(D)[0], budget=budget)


def are_equivalent(C: FiniteCategory, D: FiniteCategory, budget: Optional[int] = None) -> bool:
    return equivalence_witness(C, D, budget=budget) is not None


def find_group_isomorphism(G: GroupTable, H: GroupTable) -> Optional[Dict[str, str]]:
    if G.order != H.order:
        return None
    rest = [g for g in G.elements if g != G.identity]
    for images in itertools.permutations([h for h in H.elements if h != H.identity]):
        mapping = dict(zip(rest, images))
        mapping[G.identity] = H.identity
        if all(
            mapping[G.multiply(a, b)] == H.multiply(mapping[a], mapping[b])
            for a in G.elements
            for b in G.elements
        ):
            return mapping
    return None
