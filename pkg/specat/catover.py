"""The category of all functors into ``X`` and strict reconstruction up to isomorphism."""

from __future__ import annotations

import logging
import time
from typing import Dict, List, Optional, Tuple

from .catcore import (
    FiniteCategory,
    FunctorData,
    MorId,
    ObjId,
    build_category,
    disjoint_union,
    is_connected,
    mor_brace,
    opposite,
)
from .config import get_settings
from .constructive import ConstructiveFunctor, con_coproduct, empty_constructive, enumerate_con_morphisms, induced_morphism
from .errors import EndomorphismNotClosed, NotConnected, SizeBound, UnknownObject
from .functcore import find_isomorphism, identity_functor
from .links import Link, amalgamate, gluing_maps, join_link, point
from .reconstruct import (
    Cocone,
    ComparisonVerdict,
    DaggerData,
    DaggerMor,
    Fragment,
    Key,
    Provenance,
    RoundtripResult,
    assemble,
    compose_bridges,
    dagger_mor,
    detect_minimal,
    end_pairs,
    recover_composition,
    shuffle_fragment,
)

CatFragment = Fragment


def as_object(F: FunctorData) -> ConstructiveFunctor:
    """An object of ``Cat_X``; the lift table stays empty and only the functor is read."""

    return ConstructiveFunctor(F, {})


def point_functor(X: FiniteCategory, e: ObjId) -> FunctorData:
    """``F_e: Dis({e}) -> X``."""

    if e not in X.identity:
        raise UnknownObject(f"{e} is not an object of {X.name}")
    return point(X, e).to_functor(f"Y[{e}]")


def _arrow_ends(X: FiniteCategory, v: MorId) -> Tuple[ObjId, ObjId]:
    return tuple(sorted((X.dom[v], X.cod[v])))


def arrow_link(X: FiniteCategory, v: MorId) -> Link:
    """Two points joined by ``v``, the smaller object as copy ``0``; an endomorphism joins two copies of its object."""

    e, e2 = _arrow_ends(X, v)
    return join_link(point(X, e), point(X, e2), {(e, e2): v}, forward=X.dom[v] == e, tag=v)


def arrow_functor(X: FiniteCategory, v: MorId) -> Tuple[FunctorData, FunctorData]:
    """``F_v`` on the subcategory ``{id_e, id_e', v}`` and ``Υ_v: F_e ⊔ F_e' -> F_v``."""

    e, e2 = _arrow_ends(X, v)
    coproduct = disjoint_union(point_functor(X, e).source, point_functor(X, e2).source, name=f"Y[{e}]+Y[{e2}]")
    if e != e2:
        F = arrow_link(X, v).body.to_functor(f"Y[{v}]")
        Y = F.source
        upsilon = FunctorData(
            coproduct,
            Y,
            {o: o for o in coproduct.objects},
            {m: Y.identity[coproduct.dom[m]] for m in coproduct.morphisms},
        )
        return F, upsilon
    square = X.table[(v, v)]
    if square not in (X.identity[e], v):
        raise EndomorphismNotClosed(f"{v} ∘ {v} = {square} leaves {{{X.identity[e]}, {v}}}")
    morphisms = {X.identity[e]: (e, e), v: (e, e)}
    table = {(g, f): X.table[(g, f)] for g in morphisms for f in morphisms}
    Y = build_category(f"Y[{v}]", (e,), morphisms, table, {e: X.identity[e]})
    F = FunctorData(Y, X, {e: e}, {m: m for m in morphisms})
    upsilon = FunctorData(coproduct, Y, {o: e for o in coproduct.objects}, {m: X.identity[e] for m in coproduct.morphisms})
    return F, upsilon


def _check_bounds(X: FiniteCategory) -> None:
    if not is_connected(X):
        raise NotConnected(f"{X.name} is not connected")
    settings = get_settings()
    if len(X.objects) > settings.max_objects or len(X.morphisms) > settings.max_morphisms:
        raise SizeBound(
            f"{X.name} has {len(X.objects)} object(s) and {len(X.morphisms)} morphism(s); "
            f"bounds are {settings.max_objects} and {settings.max_morphisms}"
        )


def _arrow_object(X: FiniteCategory, v: MorId) -> Tuple[Link, ConstructiveFunctor]:
    """The link and object of ``v``: ``F_v`` between distinct objects, two copies of the point for an endomorphism."""

    link = arrow_link(X, v)
    if X.dom[v] != X.cod[v]:
        F, _upsilon = arrow_functor(X, v)
    else:
        F = link.body.to_functor(f"Y[{v}]")
    return link, as_object(F)


def build_cat_fragment(X: FiniteCategory, seed: Optional[int] = None, budget: Optional[int] = None) -> CatFragment:
    """Points, arrow objects for every morphism, their coproducts and amalgams, and the empty functor.

    Arrow objects are amalgamated at every pair of copies over the same object.
    """

    _check_bounds(X)
    objects = sorted(X.objects)
    built: List[Tuple[Provenance, ConstructiveFunctor]] = [(("empty",), empty_constructive(X))]
    points = {e: as_object(point_functor(X, e)) for e in objects}
    built.extend((("point", e), points[e]) for e in objects)

    arrows: Dict[MorId, Tuple[Link, ConstructiveFunctor]] = {}
    for i, e in enumerate(objects):
        for e2 in objects[i:]:
            for v in sorted(mor_brace(X, e, e2)):
                arrows[v] = _arrow_object(X, v)
                built.append((("arrow", v), arrows[v][1]))

    coproducts = {}
    for i, e in enumerate(objects):
        for e2 in objects[i:]:
            data = con_coproduct(points[e], points[e2])
            built.append((("coproduct", e, e2), data.obj))
            coproducts[(("point", e), ("point", e2))] = (("coproduct", e, e2), data.left, data.right)

    pushouts: List[Cocone] = []
    names = sorted(arrows)
    for n, v in enumerate(names):
        for v2 in names[n:]:
            (link, first), (link2, second) = arrows[v], arrows[v2]
            for a, b in end_pairs(_arrow_ends(X, v), _arrow_ends(X, v2), v == v2):
                e = _arrow_ends(X, v)[a]
                glued = amalgamate(link, a, link2, b)
                obj = as_object(glued.body.to_functor(f"Y[{v}@{a}+{v2}@{b}]"))
                map_a, map_b = gluing_maps(link, a, link2, b)
                provenance = ("pushout", f"{v}@{a}", f"{v2}@{b}")
                built.append((provenance, obj))
                pushouts.append(
                    Cocone(
                        ("arrow", v),
                        ("arrow", v2),
                        ("point", e),
                        (
                            induced_morphism(points[e], first, {e: f"{a}:{e}"}),
                            induced_morphism(points[e], second, {e: f"{b}:{e}"}),
                        ),
                        provenance,
                        (induced_morphism(first, obj, map_a), induced_morphism(second, obj, map_b)),
                    )
                )

    fragment = shuffle_fragment(X, built, coproducts, pushouts, seed=seed, budget=budget)
    logging.info(
        "Built Cat fragment over %s: %d object(s), %d arrow(s), %d amalgam(s)",
        X.name,
        len(built),
        len(arrows),
        len(pushouts),
    )
    return fragment


def terminal_is_terminal(fragment: CatFragment) -> bool:
    """``id_X`` receives exactly one morphism from every object of the fragment."""

    terminal = as_object(identity_functor(fragment.base))
    return all(
        sum(1 for _phi in enumerate_con_morphisms(fragment.objects[k], terminal, budget=fragment.budget)) == 1
        for k in fragment.order
    )


def detect_minimal_cat(fragment: CatFragment) -> Tuple[Key, ...]:
    return detect_minimal(fragment)


def dagger_mor_cat(fragment: CatFragment, M: Key, M2: Key, minimal: Optional[Tuple[Key, ...]] = None) -> Tuple[DaggerMor, ...]:
    """Classes of ``(F, Υ)`` over a pair of points, identities and isomorphisms included."""

    return dagger_mor(fragment, M, M2, minimal, keep_folds=True)


def recover_cat(fragment: CatFragment) -> DaggerData:
    minimal = detect_minimal_cat(fragment)
    mors = {}
    for i, M in enumerate(minimal):
        for M2 in minimal[i:]:
            classes = dagger_mor_cat(fragment, M, M2, minimal)
            if classes:
                mors[(M, M2)] = classes
    logging.info("Recovered %d point(s) and %d arrow class(es)", len(minimal), sum(len(c) for c in mors.values()))
    return recover_composition(fragment, DaggerData(minimal, {}, mors))


def compose_arrows_cat(fragment: CatFragment, first: DaggerMor, second: DaggerMor, third: DaggerMor) -> bool:
    """Whether ``F_third`` embeds compatibly in an amalgam of ``F_first`` and ``F_second``."""

    return compose_bridges(fragment, first, second, third)


def compare_strict(X: FiniteCategory, X2: FiniteCategory, budget: Optional[int] = None) -> ComparisonVerdict:
    for C in (X, X2):
        if not is_connected(C):
            raise NotConnected(f"{C.name} is not connected")
    witnesses = {}
    direct = find_isomorphism(X, X2, budget=budget)
    if direct is not None:
        witnesses["isomorphic"] = direct
    dual = find_isomorphism(opposite(X), X2, budget=budget)
    if dual is not None:
        witnesses["op_isomorphic"] = dual
    return ComparisonVerdict(direct is not None, dual is not None, witnesses)


def roundtrip_strict(X: FiniteCategory, seed: Optional[int] = None, budget: Optional[int] = None) -> RoundtripResult:
    """Rebuild ``X`` from its ``Cat_X`` fragment and test isomorphism with ``X`` or ``X^op``."""

    timings: Dict[str, float] = {}
    started = time.perf_counter()
    fragment = build_cat_fragment(X, seed=seed, budget=budget)
    timings["fragment"] = (time.perf_counter() - started) * 1000
    started = time.perf_counter()
    daggers = recover_cat(fragment)
    timings["recover"] = (time.perf_counter() - started) * 1000
    started = time.perf_counter()
    assembled, orientation = assemble(daggers)
    timings["assemble"] = (time.perf_counter() - started) * 1000
    started = time.perf_counter()
    matches, witness = None, find_isomorphism(assembled, X, budget=budget)
    if witness is not None:
        matches = "X"
    else:
        witness = find_isomorphism(assembled, opposite(X), budget=budget)
        matches = "X^op" if witness is not None else None
    timings["compare"] = (time.perf_counter() - started) * 1000
    logging.info("Strict roundtrip of %s: %s", X.name, matches or "no match")
    return RoundtripResult(
        passed=matches is not None,
        matches=matches,
        assembled=assembled,
        orientation=orientation,
        fragment_objects=len(fragment.order),
        minimal_objects=len(daggers.dagger_ob),
        timings_ms=timings,
        witness=witness,
    )


def base_arrow(fragment: CatFragment, dm: DaggerMor) -> MorId:
    """The morphism of ``X`` whose arrow object represents ``dm`` (oracle only)."""

    kind, *rest = fragment.provenance[dm.target]
    if kind != "arrow":
        raise UnknownObject(f"{dm.target} was not built as an arrow object")
    return rest[0]
