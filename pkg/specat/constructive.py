"""Constructive functors over a finite category and the constructions on them."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .catcore import (
    FiniteCategory,
    FunctorData,
    GroupTable,
    MorId,
    ObjId,
    Subcategory,
    automorphism_group,
    build_category,
    disjoint_union,
    groupoid_component,
    inverse_of,
    is_connected,
    is_isomorphism,
)
from .config import get_settings
from .errors import (
    DomainMismatch,
    LawViolation,
    LiftMissing,
    LiftNotUnique,
    NoColimit,
    NotAnIso,
    NotConnectedGroupoid,
    NotFaithful,
    NotInvertible,
    NotMaximalGroupoid,
    SameComponent,
    SearchBudgetExceeded,
    VIsInvertible,
)
from .functcore import compose_functors, identity_functor, is_faithful, op_functor
from .links import Link, ThinOver, amalgamate, gluing_maps, join_link


@dataclass(frozen=True)
class ConstructiveFunctor:
    """A faithful functor ``Y -> X`` with its table of unique isomorphism lifts."""

    functor: FunctorData
    lifts: Mapping[Tuple[ObjId, MorId], MorId]
    payload: Mapping[ObjId, Tuple[str, ...]] = field(default_factory=dict)

    @property
    def total(self) -> FiniteCategory:
        return self.functor.source

    @property
    def base(self) -> FiniteCategory:
        return self.functor.target

    def fiber(self, x: ObjId) -> Tuple[ObjId, ...]:
        return tuple(y for y in self.total.objects if self.functor.object_map[y] == x)


@dataclass(frozen=True)
class ConMorphism:
    """A functor ``Φ`` between total categories with ``F' ∘ Φ = F``."""

    source: ConstructiveFunctor
    target: ConstructiveFunctor
    functor: FunctorData


@dataclass(frozen=True)
class CoproductData:
    obj: ConstructiveFunctor
    left: ConMorphism
    right: ConMorphism


@dataclass(frozen=True)
class FiberProductData:
    obj: ConstructiveFunctor
    first: FunctorData
    second: FunctorData


@dataclass(frozen=True)
class Bridge:
    """The cover glued along a non-invertible ``v`` and its inclusion ``Υ_v``."""

    functor: ConstructiveFunctor
    upsilon: ConMorphism
    v: MorId
    ends: Tuple[ObjId, ObjId]
    forward: bool  # v runs from ends[0] to ends[1]
    link: Link


def is_constructive(F: FunctorData) -> ConstructiveFunctor:
    """Certify ``F``: faithful, and every isomorphism of the base lifts uniquely."""

    if not is_faithful(F):
        raise NotFaithful(f"{F.source.name} -> {F.target.name} is not faithful")
    Y, X = F.source, F.target
    lifts: Dict[Tuple[ObjId, MorId], MorId] = {}
    for a in Y.objects:
        x = F.object_map[a]
        for u in X.morphisms:
            if X.dom[u] != x or not is_isomorphism(X, u):
                continue
            found = [m for m in Y.morphisms if Y.dom[m] == a and F.morphism_map[m] == u and is_isomorphism(Y, m)]
            if not found:
                raise LiftMissing(f"isomorphism {u} has no lift at {a}")
            if len(found) > 1:
                raise LiftNotUnique(f"isomorphism {u} has {len(found)} lifts at {a}")
            lifts[(a, u)] = found[0]
    return ConstructiveFunctor(F, lifts)


def lift_iso(F: ConstructiveFunctor, a: ObjId, u: MorId) -> MorId:
    X = F.base
    if not is_isomorphism(X, u):
        raise NotAnIso(f"{u} is not an isomorphism of {X.name}")
    if X.dom[u] != F.functor.object_map[a]:
        raise DomainMismatch(f"{u} does not start at the image of {a}")
    return F.lifts[(a, u)]


def _with_payload(F: ConstructiveFunctor, payload: Mapping[ObjId, Tuple[str, ...]]) -> ConstructiveFunctor:
    return ConstructiveFunctor(F.functor, F.lifts, dict(payload))


def _search_order(Y: FiniteCategory) -> List[ObjId]:
    graph = nx.Graph()
    graph.add_nodes_from(Y.objects)
    graph.add_edges_from((Y.dom[m], Y.cod[m]) for m in Y.morphisms)
    order: List[ObjId] = []
    for start in Y.objects:
        if start in order:
            continue
        order.append(start)
        order.extend(v for _u, v in nx.bfs_edges(graph, start))
    return order


def enumerate_over(F: FunctorData, G: FunctorData, budget: Optional[int] = None) -> Iterator[FunctorData]:
    """Yield every functor ``Φ: Y -> Y'`` with ``G ∘ Φ = F`` (morphisms of ``Cat_X``)."""

    Y, Y2 = F.source, G.source
    limit = get_settings().budget if budget is None else budget
    nodes = 0
    order = _search_order(Y)
    fibers: Dict[ObjId, List[ObjId]] = {}
    for y2 in Y2.objects:
        fibers.setdefault(G.object_map[y2], []).append(y2)
    over: Dict[Tuple[ObjId, ObjId, MorId], List[MorId]] = {}
    for m2 in Y2.morphisms:
        over.setdefault((Y2.dom[m2], Y2.cod[m2], G.morphism_map[m2]), []).append(m2)
    touching: Dict[ObjId, List[MorId]] = {y: [] for y in Y.objects}
    for m in Y.morphisms:
        touching[Y.dom[m]].append(m)
        if Y.cod[m] != Y.dom[m]:
            touching[Y.cod[m]].append(m)
    object_map: Dict[ObjId, ObjId] = {}

    def consistent(y: ObjId) -> bool:
        for m in touching[y]:
            a, b = Y.dom[m], Y.cod[m]
            if a in object_map and b in object_map:
                if not over.get((object_map[a], object_map[b], F.morphism_map[m])):
                    return False
        return True

    def morphism_maps() -> Iterator[Dict[MorId, MorId]]:
        choices = [
            (m, over[(object_map[Y.dom[m]], object_map[Y.cod[m]], F.morphism_map[m])]) for m in Y.morphisms
        ]
        chosen: Dict[MorId, MorId] = {}

        def pick(index: int) -> Iterator[Dict[MorId, MorId]]:
            if index == len(choices):
                if all(
                    Y2.table[(chosen[g], chosen[f])] == chosen[h] for (g, f), h in Y.table.items()
                ) and all(chosen[Y.identity[y]] == Y2.identity[object_map[y]] for y in Y.objects):
                    yield dict(chosen)
                return
            m, candidates = choices[index]
            for candidate in candidates:
                chosen[m] = candidate
                yield from pick(index + 1)
            chosen.pop(m, None)

        yield from pick(0)

    def place(index: int) -> Iterator[FunctorData]:
        nonlocal nodes
        if index == len(order):
            for morphism_map in morphism_maps():
                yield FunctorData(Y, Y2, dict(object_map), morphism_map)
            return
        y = order[index]
        for y2 in fibers.get(F.object_map[y], []):
            nodes += 1
            if nodes > limit:
                raise SearchBudgetExceeded(limit)
            object_map[y] = y2
            if consistent(y):
                yield from place(index + 1)
            del object_map[y]

    yield from place(0)


def enumerate_con_morphisms(F: ConstructiveFunctor, G: ConstructiveFunctor, budget: Optional[int] = None) -> Iterator[ConMorphism]:
    for phi in enumerate_over(F.functor, G.functor, budget=budget):
        yield ConMorphism(F, G, phi)


def compose_con(psi: ConMorphism, phi: ConMorphism) -> ConMorphism:
    """Return ``ψ ∘ φ``."""

    return ConMorphism(phi.source, psi.target, compose_functors(psi.functor, phi.functor))


def identity_con(F: ConstructiveFunctor) -> ConMorphism:
    return ConMorphism(F, F, identity_functor(F.total))


def is_bijective(phi: FunctorData) -> bool:
    Y, Y2 = phi.source, phi.target
    return (
        len(set(phi.object_map.values())) == len(Y.objects) == len(Y2.objects)
        and len(set(phi.morphism_map.values())) == len(Y.morphisms) == len(Y2.morphisms)
    )


def is_con_iso(phi: ConMorphism) -> bool:
    return is_bijective(phi.functor)


def same_morphism(phi: ConMorphism, psi: ConMorphism) -> bool:
    return dict(phi.functor.object_map) == dict(psi.functor.object_map) and dict(phi.functor.morphism_map) == dict(
        psi.functor.morphism_map
    )


def fiber_functor_count(F: ConstructiveFunctor, e: ObjId) -> int:
    return len(F.fiber(e))


def empty_constructive(X: FiniteCategory) -> ConstructiveFunctor:
    empty = build_category("Empty", (), {}, {}, {})
    return ConstructiveFunctor(FunctorData(empty, X, {}, {}), {})


def con_coproduct(F: ConstructiveFunctor, G: ConstructiveFunctor) -> CoproductData:
    total = disjoint_union(F.total, G.total, name=f"({F.total.name}+{G.total.name})")
    object_map: Dict[ObjId, ObjId] = {}
    morphism_map: Dict[MorId, MorId] = {}
    payload: Dict[ObjId, Tuple[str, ...]] = {}
    injections = []
    for tag, part in (("0", F), ("1", G)):
        for y in part.total.objects:
            object_map[f"{tag}:{y}"] = part.functor.object_map[y]
            if y in part.payload:
                payload[f"{tag}:{y}"] = part.payload[y]
        for m in part.total.morphisms:
            morphism_map[f"{tag}:{m}"] = part.functor.morphism_map[m]
    lifts = {}
    for tag, part in (("0", F), ("1", G)):
        for (a, u), m in part.lifts.items():
            lifts[(f"{tag}:{a}", u)] = f"{tag}:{m}"
    obj = ConstructiveFunctor(FunctorData(total, F.base, object_map, morphism_map), lifts, payload)
    for tag, part in (("0", F), ("1", G)):
        injections.append(
            ConMorphism(
                part,
                obj,
                FunctorData(
                    part.total,
                    total,
                    {y: f"{tag}:{y}" for y in part.total.objects},
                    {m: f"{tag}:{m}" for m in part.total.morphisms},
                ),
            )
        )
    return CoproductData(obj, injections[0], injections[1])


def _pair_category(
    name: str,
    first: FunctorData,
    second: FunctorData,
) -> Tuple[FiniteCategory, Dict[ObjId, Tuple[ObjId, ObjId]], Dict[MorId, Tuple[MorId, MorId]]]:
    """The strict pullback of two functors into a common category."""

    A, B = first.source, second.source
    objects = {
        f"({a},{b})": (a, b) for a in A.objects for b in B.objects if first.object_map[a] == second.object_map[b]
    }
    morphisms = {
        f"({m},{n})": (m, n)
        for m in A.morphisms
        for n in B.morphisms
        if first.morphism_map[m] == second.morphism_map[n]
        and f"({A.dom[m]},{B.dom[n]})" in objects
    }
    ends = {
        key: (f"({A.dom[m]},{B.dom[n]})", f"({A.cod[m]},{B.cod[n]})") for key, (m, n) in morphisms.items()
    }
    table = {}
    for key_f, (f1, f2) in morphisms.items():
        for key_g, (g1, g2) in morphisms.items():
            if A.cod[f1] == A.dom[g1] and B.cod[f2] == B.dom[g2]:
                table[(key_g, key_f)] = f"({A.table[(g1, f1)]},{B.table[(g2, f2)]})"
    identity = {key: f"({A.identity[a]},{B.identity[b]})" for key, (a, b) in objects.items()}
    return build_category(name, tuple(objects), ends, table, identity), objects, morphisms


def con_fiber_product(phi1: ConMorphism, phi2: ConMorphism) -> FiberProductData:
    """Fiber product of ``Φ₁: F₁ -> F₀`` and ``Φ₂: F₂ -> F₀`` over ``X``."""

    total, objects, morphisms = _pair_category(
        f"({phi1.source.total.name}x{phi2.source.total.name})", phi1.functor, phi2.functor
    )
    F1 = phi1.source.functor
    functor = FunctorData(
        total,
        F1.target,
        {key: F1.object_map[a] for key, (a, _b) in objects.items()},
        {key: F1.morphism_map[m] for key, (m, _n) in morphisms.items()},
    )
    obj = is_constructive(functor)
    first = FunctorData(total, phi1.source.total, {k: a for k, (a, _b) in objects.items()}, {k: m for k, (m, _n) in morphisms.items()})
    second = FunctorData(total, phi2.source.total, {k: b for k, (_a, b) in objects.items()}, {k: n for k, (_m, n) in morphisms.items()})
    return FiberProductData(obj, first, second)


def pullback_along(f: FunctorData, F: ConstructiveFunctor) -> ConstructiveFunctor:
    """``f^*(F) = Y ×_X X'`` as a constructive functor over ``X'``."""

    total, objects, morphisms = _pair_category(f"{F.total.name}x{f.source.name}", F.functor, f)
    functor = FunctorData(
        total,
        f.source,
        {key: b for key, (_a, b) in objects.items()},
        {key: n for key, (_m, n) in morphisms.items()},
    )
    return is_constructive(functor)


def groupoid_category(G: Subcategory) -> FiniteCategory:
    return G.as_category(name=f"{G.parent.name}|G[{min(G.objects)}]")


def inclusion_of(G: Subcategory) -> FunctorData:
    category = groupoid_category(G)
    return FunctorData(category, G.parent, {o: o for o in category.objects}, {m: m for m in category.morphisms})


def restrict_to_groupoid(G: Subcategory, F: ConstructiveFunctor) -> ConstructiveFunctor:
    """``ι_G^* F``: the part of ``F`` lying over ``G``."""

    return pullback_along(inclusion_of(G), F)


def _check_maximal(G: Subcategory) -> None:
    X = G.parent
    expected = groupoid_component(X, min(G.objects))
    if expected.objects != G.objects or expected.morphisms != G.morphisms:
        raise NotMaximalGroupoid(f"{sorted(G.objects)} is not a maximal connected groupoid of {X.name}")


def pushforward_groupoid(G: Subcategory, F: ConstructiveFunctor) -> ConstructiveFunctor:
    """``ι_{G*} F``: the same total category, seen over the whole of ``X``."""

    _check_maximal(G)
    X = G.parent
    functor = FunctorData(F.total, X, dict(F.functor.object_map), dict(F.functor.morphism_map))
    return ConstructiveFunctor(functor, dict(F.lifts), dict(F.payload))


def _require_connected_groupoid(G: FiniteCategory) -> None:
    if not is_connected(G) or not all(is_isomorphism(G, m) for m in G.morphisms):
        raise NotConnectedGroupoid(f"{G.name} is not a connected groupoid")


def cover_object(a: ObjId, u: MorId) -> ObjId:
    return f"({a},{u})"


def cover_thin(G: FiniteCategory, e: ObjId, base: Optional[FiniteCategory] = None) -> Tuple[ThinOver, Dict[ObjId, Tuple[ObjId, MorId]]]:
    """Objects ``(a, u)`` with ``u: e -> a``; the unique arrow to ``(a', u')`` is ``u' ∘ u⁻¹``."""

    points = {cover_object(G.cod[u], u): (G.cod[u], u) for u in G.morphisms if G.dom[u] == e}
    arrows: Dict[Tuple[ObjId, ObjId], MorId] = {}
    for p, (_a, u) in points.items():
        u_inv = inverse_of(G, u)
        for q, (_b, w) in points.items():
            arrows[(p, q)] = G.table[(w, u_inv)]
    labels = {p: a for p, (a, _u) in points.items()}
    return ThinOver(base or G, labels, arrows), points


def universal_cover(G: FiniteCategory, e: ObjId) -> ConstructiveFunctor:
    """``F_{G,e}: Y_{G,e} -> G`` for a connected groupoid ``G``."""

    _require_connected_groupoid(G)
    thin, points = cover_thin(G, e)
    F = is_constructive(thin.to_functor(f"Y[{G.name},{e}]"))
    return _with_payload(F, points)


def point_cover(X: FiniteCategory, e: ObjId) -> ConstructiveFunctor:
    """``F⁺_{G,e}``: the universal cover of the groupoid of ``e``, pushed forward to ``X``."""

    G = groupoid_component(X, e)
    return pushforward_groupoid(G, universal_cover(groupoid_category(G), e))


def deck(X: FiniteCategory, w: MorId) -> ConMorphism:
    """``Φ_w: F⁺_{G,e} -> F⁺_{G,e'}``, ``(a, u) ↦ (a, u ∘ w⁻¹)``, for ``w: e -> e'``."""

    w_inv = inverse_of(X, w)
    if w_inv is None:
        raise NotInvertible(f"{w} is not invertible")
    source = point_cover(X, X.dom[w])
    target = point_cover(X, X.cod[w])
    object_map = {
        p: cover_object(a, X.table[(u, w_inv)]) for p, (a, u) in source.payload.items()
    }
    return induced_morphism(source, target, object_map)


def aut_group_of_cover(X: FiniteCategory, e: ObjId) -> Tuple[GroupTable, Dict[MorId, ConMorphism]]:
    """``Aut(e)`` with the isomorphism ``w ↦ Φ_w`` onto the automorphisms of ``F⁺_{G,e}``."""

    group = automorphism_group(X, e)
    decks = {w: deck(X, w) for w in group.elements}
    cover = point_cover(X, e)
    automorphisms = [phi for phi in enumerate_con_morphisms(cover, cover) if is_con_iso(phi)]
    if len(automorphisms) != group.order:
        raise LawViolation(f"Aut({e}) has {group.order} element(s) but the cover has {len(automorphisms)}")
    for a in group.elements:
        for b in group.elements:
            if not same_morphism(compose_con(decks[a], decks[b]), decks[group.multiply(a, b)]):
                raise LawViolation(f"deck transformations of {a} and {b} do not multiply")
    images = {tuple(sorted(phi.functor.object_map.items())) for phi in decks.values()}
    if len(images) != group.order:
        raise LawViolation("deck transformations are not pairwise distinct")
    return group, decks


def evaluate_at_base(phi: ConMorphism, e: ObjId) -> ObjId:
    """``ev(Φ) = Φ((e, id_e))``."""

    return phi.functor.object_map[cover_object(e, phi.source.base.identity[e])]


def morphism_from_fiber(cover: ConstructiveFunctor, F: ConstructiveFunctor, e: ObjId, y: ObjId) -> ConMorphism:
    """The unique ``Φ`` with ``Φ((e, id_e)) = y``: ``(a, u)`` goes to the target of the lift of ``u`` at ``y``."""

    if F.functor.object_map[y] != e:
        raise DomainMismatch(f"{y} does not lie over {e}")
    object_map = {p: F.total.cod[lift_iso(F, y, u)] for p, (_a, u) in cover.payload.items()}
    return induced_morphism(cover, F, object_map)


def ev(cover: ConstructiveFunctor, F: ConstructiveFunctor, e: ObjId) -> Dict[ObjId, ConMorphism]:
    """The bijection ``F⁻¹(e) -> Mor(F_{G,e}, F)``, checked against enumeration."""

    table = {y: morphism_from_fiber(cover, F, e, y) for y in F.fiber(e)}
    enumerated = list(enumerate_con_morphisms(cover, F))
    if len(enumerated) != len(table):
        raise LawViolation(f"{len(enumerated)} morphism(s) out of the cover but {len(table)} fiber point(s)")
    for phi in enumerated:
        y = evaluate_at_base(phi, e)
        if not same_morphism(phi, table[y]):
            raise LawViolation(f"morphism evaluating to {y} is not the one built from lifts")
    return table


def _components_of(X: FiniteCategory, v: MorId, e: ObjId, e2: ObjId) -> Tuple[Subcategory, Subcategory]:
    if is_isomorphism(X, v):
        raise VIsInvertible(f"{v} is invertible")
    if {X.dom[v], X.cod[v]} != {e, e2} and not (X.dom[v] == X.cod[v] == e == e2):
        raise DomainMismatch(f"{v} does not connect {e} and {e2}")
    return groupoid_component(X, e), groupoid_component(X, e2)


def _join_covers(X: FiniteCategory, v: MorId, e: ObjId, e2: ObjId, G: Subcategory, G2: Subcategory) -> Bridge:
    first, first_points = cover_thin(groupoid_category(G), e, base=X)
    second, second_points = cover_thin(groupoid_category(G2), e2, base=X)
    forward = X.dom[v] == e
    cross: Dict[Tuple[ObjId, ObjId], MorId] = {}
    for p, (_a, u) in first_points.items():
        for q, (_b, w) in second_points.items():
            if forward:
                cross[(p, q)] = X.table[(w, X.table[(v, inverse_of(X, u))])]
            else:
                cross[(p, q)] = X.table[(u, X.table[(v, inverse_of(X, w))])]
    link = join_link(first, second, cross, forward, tag=v)
    F = is_constructive(link.body.to_functor(f"Y[{v}]"))
    payload = {f"0:{p}": pt for p, pt in first_points.items()}
    payload.update({f"1:{q}": pt for q, pt in second_points.items()})
    F = _with_payload(F, payload)
    coproduct = con_coproduct(point_cover(X, e), point_cover(X, e2)).obj
    upsilon = induced_morphism(coproduct, F, {y: y for y in coproduct.total.objects})
    return Bridge(F, upsilon, v, (e, e2), forward, link)


def bridge(X: FiniteCategory, v: MorId, e: ObjId, e2: ObjId, allow_endo: bool = False) -> Bridge:
    """``F⁺_v`` and ``Υ_v`` for a non-invertible ``v`` in ``Mor{e, e2}``.

    Copy ``0`` of the total category covers the groupoid of ``e`` and copy
    ``1`` the groupoid of ``e2``; when ``allow_endo`` is set, ``e == e2`` gives
    two copies of the same cover.  ``Υ_v`` is the inclusion of the coproduct
    of the two covers, object names unchanged.
    """

    G, G2 = _components_of(X, v, e, e2)
    if G.objects == G2.objects and not (allow_endo and e == e2):
        raise SameComponent(f"{e} and {e2} lie in the same groupoid")
    return _join_covers(X, v, e, e2, G, G2)


def identity_link(X: FiniteCategory, e: ObjId) -> Bridge:
    """Two copies of the cover of ``e`` joined along ``id_e``; it folds back onto the cover."""

    G = groupoid_component(X, e)
    return _join_covers(X, X.identity[e], e, e, G, G)


def bridge_end(b: Bridge, index: int) -> ConMorphism:
    """The inclusion of the cover of ``b.ends[index]`` as copy ``index``."""

    cover = point_cover(b.functor.base, b.ends[index])
    return induced_morphism(cover, b.functor, {y: f"{index}:{y}" for y in cover.total.objects})


@dataclass(frozen=True)
class PushoutData:
    obj: ConstructiveFunctor
    link: Link
    left: ConMorphism
    right: ConMorphism


def induced_morphism(F: ConstructiveFunctor, G: ConstructiveFunctor, object_map: Mapping[ObjId, ObjId]) -> ConMorphism:
    """The morphism over ``X`` with the given object map, morphisms matched by label."""

    Y, Y2 = F.total, G.total
    morphism_map = {}
    for m in Y.morphisms:
        label = F.functor.morphism_map[m]
        found = [n for n in Y2.hom(object_map[Y.dom[m]], object_map[Y.cod[m]]) if G.functor.morphism_map[n] == label]
        if not found:
            raise LawViolation(f"{m} has no image over {label}")
        morphism_map[m] = found[0]
    return ConMorphism(F, G, FunctorData(Y, Y2, dict(object_map), morphism_map))


class HomCache:
    """Hom-sets between constructive functors, enumerated once per pair."""

    def __init__(self, budget: Optional[int] = None) -> None:
        self.budget = budget
        self._homs: Dict[Tuple[int, int], Tuple[ConstructiveFunctor, ConstructiveFunctor, List[ConMorphism]]] = {}

    def __call__(self, F: ConstructiveFunctor, G: ConstructiveFunctor) -> List[ConMorphism]:
        key = (id(F), id(G))
        if key not in self._homs:
            self._homs[key] = (F, G, list(enumerate_con_morphisms(F, G, budget=self.budget)))
        return self._homs[key][2]


def pushout_bridges(
    first: Bridge,
    second: Bridge,
    fragment: Sequence[ConstructiveFunctor] = (),
    at: Optional[Tuple[int, int]] = None,
    homs: Optional[HomCache] = None,
) -> PushoutData:
    """Colimit of ``F⁺_v <- F⁺_{G'} -> F⁺_{v'}`` glued along the shared middle cover.

    ``at`` names the glued copies; without it the bridges must share exactly
    one end.  Raises :class:`NoColimit` when the named copies cover different
    groupoids or when the glued category is not constructive.  The universal
    property is checked against every object of ``fragment``.
    """

    if at is None:
        shared = [(i, j) for i in (0, 1) for j in (0, 1) if first.ends[i] == second.ends[j]]
        if len(shared) != 1:
            raise NoColimit(f"bridges {first.v} and {second.v} do not share exactly one end")
        at = shared[0]
    i, j = at
    if first.ends[i] != second.ends[j]:
        raise NoColimit(f"copy {i} of {first.v} and copy {j} of {second.v} cover different groupoids")
    try:
        glued = amalgamate(first.link, i, second.link, j)
        F = is_constructive(glued.body.to_functor(f"Y[{first.v}@{i}+{second.v}@{j}]"))
    except (LiftMissing, LiftNotUnique, NotFaithful, LawViolation) as exc:
        raise NoColimit(f"gluing {first.v} and {second.v} is not constructive") from exc
    map_a, map_b = gluing_maps(first.link, i, second.link, j)
    result = PushoutData(F, glued, induced_morphism(first.functor, F, map_a), induced_morphism(second.functor, F, map_b))
    homs = homs or HomCache()
    for K in fragment:
        _check_pushout_property(first, second, at, result, K, homs)
    logging.debug("Pushout of %s and %s has %d object(s)", first.v, second.v, len(F.total.objects))
    return result


def _check_pushout_property(
    first: Bridge,
    second: Bridge,
    shared: Tuple[int, int],
    pushout: PushoutData,
    K: ConstructiveFunctor,
    homs: HomCache,
) -> None:
    """Each compatible pair of maps out of the bridges factors uniquely through the gluing."""

    i, j = shared
    middle = first.link.end_bodies[i]
    out = list(enumerate_con_morphisms(pushout.obj, K, budget=homs.budget))
    compatible = [
        (phi, psi)
        for phi in homs(first.functor, K)
        for psi in homs(second.functor, K)
        if all(
            phi.functor.object_map[first.link.ends[i][o]] == psi.functor.object_map[second.link.ends[j][o]]
            for o in middle.labels
        )
    ]
    if len(compatible) != len(out):
        raise NoColimit(f"gluing fails the universal property against {K.total.name}")
    for chi in out:
        if not any(
            same_morphism(compose_con(chi, pushout.left), phi) and same_morphism(compose_con(chi, pushout.right), psi)
            for phi, psi in compatible
        ):
            raise NoColimit(f"a map out of the gluing into {K.total.name} does not restrict to a compatible pair")


def mono_in_fragment(
    phi: ConMorphism,
    fragment: Sequence[ConstructiveFunctor],
    hom_sets: Optional[Sequence[Sequence[ConMorphism]]] = None,
) -> bool:
    """Left-cancellability of ``Φ`` against every object of ``fragment``.

    ``hom_sets[i]``, when given, holds the morphisms ``fragment[i] -> Φ.source``.
    """

    for i, K in enumerate(fragment):
        maps = hom_sets[i] if hom_sets is not None else list(enumerate_con_morphisms(K, phi.source))
        images = {
            tuple(sorted(compose_con(phi, psi).functor.object_map.items()))
            + tuple(sorted(compose_con(phi, psi).functor.morphism_map.items()))
            for psi in maps
        }
        if len(images) != len(maps):
            return False
    return True


def op_constructive(F: ConstructiveFunctor) -> ConstructiveFunctor:
    """``F^op: Y^op -> X^op``, again constructive."""

    return _with_payload(is_constructive(op_functor(F.functor)), F.payload)


def is_groupoid_cover_iso(phi: ConMorphism) -> bool:
    return is_con_iso(phi)


def hom_count(F: ConstructiveFunctor, G: ConstructiveFunctor) -> int:
    return sum(1 for _phi in enumerate_con_morphisms(F, G))
