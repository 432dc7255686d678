"""Structure species, their morphisms, and realization as constructive functors."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .catcore import FiniteCategory, FunctorData, MorId, ObjId, OrderedSet, build_category, dis, is_isomorphism
from .config import get_settings
from .constructive import ConMorphism, ConstructiveFunctor, is_constructive
from .errors import FunctorLawViolation, MonotonicityViolation, PayloadTooLarge, SubfunctorViolation

Subset = FrozenSet[str]


@dataclass(frozen=True)
class StructureSpecies:
    """``Σ = (E, S)``: an order per object, a monotone map per morphism, and selected structures.

    ``S`` on isomorphisms is the restriction of ``E``, so only the selected
    subsets are stored.
    """

    base: FiniteCategory
    orders: Mapping[ObjId, OrderedSet]
    emaps: Mapping[MorId, Mapping[str, str]]
    structures: Mapping[ObjId, Tuple[str, ...]]
    name: str = "Sigma"


@dataclass(frozen=True)
class SpeciesMorphism:
    source: StructureSpecies
    target: StructureSpecies
    components: Mapping[ObjId, Mapping[str, str]] = field(default_factory=dict)


def emap(sigma: StructureSpecies, u: MorId) -> Mapping[str, str]:
    """``E(u)``; identities default to the identity map."""

    X = sigma.base
    if u in sigma.emaps:
        return sigma.emaps[u]
    if X.is_identity(u):
        return {x: x for x in sigma.orders[X.dom[u]].carrier}
    raise FunctorLawViolation(f"E has no map for {u}", [u])


def species_violations(sigma: StructureSpecies) -> List[str]:
    X = sigma.base
    violations: List[str] = []
    for a in X.objects:
        if a not in sigma.orders:
            violations.append(f"E has no order at {a}")
    if violations:
        return violations
    for u in X.morphisms:
        source, target = sigma.orders[X.dom[u]], sigma.orders[X.cod[u]]
        try:
            f = emap(sigma, u)
        except FunctorLawViolation as exc:
            violations.append(str(exc))
            continue
        if set(f) != set(source.carrier) or not set(f.values()) <= set(target.carrier):
            violations.append(f"E({u}) is not a map {X.dom[u]} -> {X.cod[u]}")
            continue
        broken = next(((x, y) for x, y in source.relation if not target.leq(f[x], f[y])), None)
        if broken is not None:
            violations.append(f"E({u}) is not monotone at {broken[0]} < {broken[1]}")
    if violations:
        return violations
    for a in X.objects:
        if any(emap(sigma, X.identity[a])[x] != x for x in sigma.orders[a].carrier):
            violations.append(f"E does not preserve the identity of {a}")
    for (g, f), h in X.table.items():
        first, second, composite = emap(sigma, f), emap(sigma, g), emap(sigma, h)
        if any(second[first[x]] != composite[x] for x in first):
            violations.append(f"E does not preserve {g} ∘ {f} = {h}")
    return violations


def validate_species(sigma: StructureSpecies) -> StructureSpecies:
    """Check functoriality of ``E`` and that ``Dis ∘ S`` is a subfunctor of ``E ∘ J``."""

    violations = species_violations(sigma)
    if violations:
        raise FunctorLawViolation(f"species {sigma.name}: {violations[0]}", violations)
    X = sigma.base
    for a in X.objects:
        selected = sigma.structures.get(a, ())
        outside = [s for s in selected if s not in sigma.orders[a].carrier]
        if outside:
            raise SubfunctorViolation(f"S({a}) contains {outside[0]} outside the carrier of E({a})")
    for u in X.morphisms:
        if not is_isomorphism(X, u):
            continue
        f = emap(sigma, u)
        image = {f[s] for s in sigma.structures.get(X.dom[u], ())}
        if image != set(sigma.structures.get(X.cod[u], ())):
            raise SubfunctorViolation(f"E({u}) does not restrict to a bijection S({X.dom[u]}) -> S({X.cod[u]})")
    logging.debug("Species %s is valid over %s", sigma.name, X.name)
    return sigma


def validate_species_morphism(phi: SpeciesMorphism) -> SpeciesMorphism:
    """Naturality over isomorphisms and ``E(u)(U) < V  =>  E'(u)(φ_a U) < φ_b V``."""

    source, target = phi.source, phi.target
    X = source.base
    for a in X.objects:
        component = phi.components.get(a, {})
        for s in source.structures.get(a, ()):
            if component.get(s) not in target.structures.get(a, ()):
                raise MonotonicityViolation(f"φ_{a} does not send {s} into S'({a})", (a, s))
    for u in X.morphisms:
        a, b = X.dom[u], X.cod[u]
        f, f2 = emap(source, u), emap(target, u)
        phi_a, phi_b = phi.components.get(a, {}), phi.components.get(b, {})
        if is_isomorphism(X, u):
            for s in source.structures.get(a, ()):
                if phi_b[f[s]] != f2[phi_a[s]]:
                    raise MonotonicityViolation(f"φ is not natural along {u} at {s}", (u, s))
        for s in source.structures.get(a, ()):
            for t in source.structures.get(b, ()):
                if source.orders[b].leq(f[s], t) and not target.orders[b].leq(f2[phi_a[s]], phi_b[t]):
                    raise MonotonicityViolation(f"φ breaks {u} at ({s}, {t})", (u, s, t))
    return phi


def identity_species_morphism(sigma: StructureSpecies) -> SpeciesMorphism:
    return SpeciesMorphism(sigma, sigma, {a: {s: s for s in sigma.structures.get(a, ())} for a in sigma.base.objects})


def compose_species_morphisms(psi: SpeciesMorphism, phi: SpeciesMorphism) -> SpeciesMorphism:
    """Return ``ψ ∘ φ``."""

    return SpeciesMorphism(
        phi.source,
        psi.target,
        {a: {s: psi.components[a][t] for s, t in phi.components.get(a, {}).items()} for a in phi.source.base.objects},
    )


def structure_object(a: ObjId, s: str) -> ObjId:
    return f"({a},{s})"


def realize(sigma: StructureSpecies) -> ConstructiveFunctor:
    """``F_Σ: Y_Σ -> X``; a morphism ``(a, T) -> (a', T')`` is a ``u`` with ``E(u)(T) < T'``."""

    X = sigma.base
    points = {structure_object(a, s): (a, s) for a in X.objects for s in sigma.structures.get(a, ())}
    arrows: Dict[MorId, Tuple[ObjId, ObjId]] = {}
    labels: Dict[MorId, MorId] = {}
    keys: Dict[Tuple[MorId, ObjId, ObjId], MorId] = {}
    for p, (a, s) in points.items():
        for q, (b, t) in points.items():
            for u in X.hom(a, b):
                if not sigma.orders[b].leq(emap(sigma, u)[s], t):
                    continue
                name = f"id_{p}" if p == q and X.is_identity(u) else f"{u}:{p}->{q}"
                arrows[name] = (p, q)
                labels[name] = u
                keys[(u, p, q)] = name
    table = {}
    for f, (p, q) in arrows.items():
        for g, (q2, r) in arrows.items():
            if q == q2:
                table[(g, f)] = keys[(X.table[(labels[g], labels[f])], p, r)]
    identity = {p: f"id_{p}" for p in points}
    total = build_category(f"Y[{sigma.name}]", tuple(points), arrows, table, identity)
    F = is_constructive(FunctorData(total, X, {p: a for p, (a, _s) in points.items()}, labels))
    logging.info("Realized %s as %d object(s) over %s", sigma.name, len(points), X.name)
    return ConstructiveFunctor(F.functor, F.lifts, {p: (a, s) for p, (a, s) in points.items()})


def realize_morphism(phi: SpeciesMorphism, source: Optional[ConstructiveFunctor] = None, target: Optional[ConstructiveFunctor] = None) -> ConMorphism:
    """``F_φ``: ``(a, T) ↦ (a, φ_a(T))`` and ``u ↦ u``."""

    F = source or realize(phi.source)
    G = target or realize(phi.target)
    object_map = {p: structure_object(a, phi.components[a][s]) for p, (a, s) in F.payload.items()}
    Y, Y2 = F.total, G.total
    morphism_map = {}
    for m in Y.morphisms:
        u = F.functor.morphism_map[m]
        morphism_map[m] = next(
            n
            for n in Y2.hom(object_map[Y.dom[m]], object_map[Y.cod[m]])
            if G.functor.morphism_map[n] == u
        )
    return ConMorphism(F, G, FunctorData(Y, Y2, object_map, morphism_map))


def subset_name(items: Iterable[str]) -> str:
    return "{" + ",".join(sorted(items)) + "}"


def family_name(family: Iterable[Subset]) -> str:
    return "{" + ",".join(subset_name(s) for s in sorted(family, key=lambda s: (len(s), sorted(s)))) + "}"


def powerset(points: Sequence[str]) -> List[Subset]:
    return [frozenset(c) for k in range(len(points) + 1) for c in itertools.combinations(points, k)]


def powerset_covariant(f: Mapping[str, str], domain: Sequence[str]) -> Dict[Subset, Subset]:
    """``P⁺(f)``: ``U ↦ f(U)``."""

    return {U: frozenset(f[x] for x in U) for U in powerset(domain)}


def powerset_contravariant(f: Mapping[str, str], domain: Sequence[str], codomain: Sequence[str]) -> Dict[Subset, Subset]:
    """``P⁻(f)``: ``U' ↦ f⁻¹(U')``."""

    return {V: frozenset(x for x in domain if f[x] in V) for V in powerset(codomain)}


def topologies(points: Sequence[str]) -> List[FrozenSet[Subset]]:
    whole = frozenset(points)
    middle = [U for U in powerset(points) if U and U != whole]
    found = []
    for k in range(len(middle) + 1):
        for chosen in itertools.combinations(middle, k):
            family = frozenset(chosen) | {frozenset(), whole}
            if all(U | V in family and U & V in family for U in family for V in family):
                found.append(family)
    return found


def topology_species(
    Z: FiniteCategory,
    points: Mapping[ObjId, Sequence[str]],
    maps: Mapping[MorId, Mapping[str, str]],
) -> StructureSpecies:
    """``Σ_top`` on a category of finite sets.

    A morphism ``u: T -> T'`` of ``Z`` carries a set map ``T' -> T``;
    ``E(u) = P⁺(P⁻(f_u))`` sends a family of subsets to its family of preimages.
    """

    limit = get_settings().max_topology_points
    for a in Z.objects:
        if len(points[a]) > limit:
            raise PayloadTooLarge(f"{a} has {len(points[a])} point(s); at most {limit} are supported")
    families = {a: [frozenset(c) for k in range(2 ** len(points[a]) + 1) for c in itertools.combinations(powerset(points[a]), k)] for a in Z.objects}
    orders = {
        a: OrderedSet(
            tuple(family_name(x) for x in families[a]),
            frozenset((family_name(x), family_name(y)) for x in families[a] for y in families[a] if x <= y),
        )
        for a in Z.objects
    }
    emaps: Dict[MorId, Dict[str, str]] = {}
    for u in Z.morphisms:
        a, b = Z.dom[u], Z.cod[u]
        f = maps[u] if u in maps else {x: x for x in points[b]}
        preimage = powerset_contravariant(f, points[b], points[a])
        emaps[u] = {family_name(x): family_name(preimage[U] for U in x) for x in families[a]}
    structures = {a: tuple(family_name(t) for t in topologies(points[a])) for a in Z.objects}
    logging.debug("Topology species on %s: %s", Z.name, {a: len(s) for a, s in structures.items()})
    return StructureSpecies(Z, orders, emaps, structures, name=f"Top[{Z.name}]")


def finite_sets(points: Mapping[ObjId, Sequence[str]], name: str = "Z") -> FiniteCategory:
    """The discrete category on the given finite sets."""

    return dis(points, name=name)
