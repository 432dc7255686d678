"""Recovering a connected category from a finite fragment of its constructive functors."""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field, replace
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .catcore import (
    FiniteCategory,
    FunctorData,
    GroupTable,
    MorId,
    ObjId,
    build_category,
    check_laws,
    inverse_of,
    is_connected,
    mor_brace_noninv,
    opposite,
    skeleton,
)
from .config import get_settings
from .constructive import (
    Bridge,
    ConMorphism,
    ConstructiveFunctor,
    HomCache,
    bridge,
    bridge_end,
    compose_con,
    con_coproduct,
    cover_object,
    empty_constructive,
    enumerate_con_morphisms,
    identity_con,
    identity_link,
    is_con_iso,
    mono_in_fragment,
    point_cover,
    pushout_bridges,
    same_morphism,
)
from .errors import InconsistentOrientation, LawViolation, NoColimit, NotConnected, NotMinimal, SizeBound
from .functcore import equivalence_witness

Key = str
Provenance = Tuple[str, ...]
Cocones = Mapping[Tuple[Provenance, Provenance], Tuple[Provenance, ConMorphism, ConMorphism]]


def _signature(phi: ConMorphism) -> Tuple:
    return tuple(sorted(phi.functor.object_map.items())), tuple(sorted(phi.functor.morphism_map.items()))


@dataclass(frozen=True)
class Cocone:
    """A chosen pushout of ``first <- middle -> second``: the two legs and the two maps into ``colimit``."""

    first: Hashable
    second: Hashable
    middle: Hashable
    legs: Tuple[ConMorphism, ConMorphism]
    colimit: Hashable
    maps: Tuple[ConMorphism, ConMorphism]

    def swapped(self) -> "Cocone":
        return Cocone(self.second, self.first, self.middle, self.legs[::-1], self.colimit, self.maps[::-1])


@dataclass
class Fragment:
    """A finite piece of ``Con_X`` with memoized hom-sets.

    Objects are known by opaque keys in shuffled order.  ``coproducts`` and
    ``pushouts`` hold the chosen colimit cocones; ``provenance`` records how
    each object was built and is read by oracle checks only.
    """

    base: FiniteCategory
    objects: Dict[Key, ConstructiveFunctor]
    order: List[Key]
    coproducts: Dict[Tuple[Key, Key], Tuple[Key, ConMorphism, ConMorphism]]
    pushouts: Dict[Tuple[Key, Key], List[Cocone]]
    provenance: Dict[Key, Tuple[str, ...]]
    budget: Optional[int] = None
    _homs: Dict[Tuple[Key, Key], List[ConMorphism]] = field(default_factory=dict, repr=False)

    def homs(self, a: Key, b: Key) -> List[ConMorphism]:
        if (a, b) not in self._homs:
            self._homs[(a, b)] = list(
                enumerate_con_morphisms(self.objects[a], self.objects[b], budget=self.budget)
            )
        return self._homs[(a, b)]

    def hom_sizes(self) -> Dict[Tuple[Key, Key], int]:
        return {(a, b): len(self.homs(a, b)) for a in self.order for b in self.order}

    def by_size(self) -> List[Key]:
        """Keys, smallest total category first; searches for a counterexample start there."""

        return sorted(self.order, key=lambda k: (len(self.objects[k].total.objects), len(self.objects[k].total.morphisms)))

    def is_initial(self, a: Key) -> bool:
        return all(len(self.homs(a, k)) == 1 for k in self.by_size())

    def is_mono(self, source: Key, phi: ConMorphism) -> bool:
        """Post-composition with ``phi`` is injective on every hom-set into ``source``."""

        return mono_in_fragment(
            phi,
            [self.objects[k] for k in self.order],
            [self.homs(k, source) for k in self.order],
        )

    def find(self, a: Key, b: Key, *conditions: Tuple[ConMorphism, ConMorphism]) -> Optional[ConMorphism]:
        """A ``chi: a -> b`` with ``chi ∘ first == second`` for each ``(first, second)`` pair."""

        for chi in self.homs(a, b):
            if all(same_morphism(compose_con(chi, first), second) for first, second in conditions):
                return chi
        return None

    def pushout(self, first: Key, leg: ConMorphism, second: Key, leg2: ConMorphism) -> Optional[Cocone]:
        """The stored pushout of ``first <- leg - M - leg2 -> second``, if one was built."""

        for cocone in self.pushouts.get((first, second), ()):
            if same_morphism(cocone.legs[0], leg) and same_morphism(cocone.legs[1], leg2):
                return cocone
        return None

    def key_of(self, *provenance: str) -> Key:
        for key, built in self.provenance.items():
            if built == provenance:
                return key
        raise KeyError(provenance)


@dataclass(frozen=True)
class AutElement:
    obj: Key
    name: str
    morphism: ConMorphism


@dataclass(frozen=True)
class AutData:
    obj: Key
    group: GroupTable
    elements: Mapping[str, AutElement]


@dataclass(frozen=True)
class DaggerMor:
    """A class representative ``(F, Υ)`` with ``Υ`` out of the coproduct of ``ends``."""

    ends: Tuple[Key, Key]
    target: Key
    upsilon: ConMorphism


@dataclass(frozen=True)
class Gluing:
    """Two classes glued at a shared end: the pushout and where the two outer ends land."""

    colimit: Key
    objects: Tuple[Key, Key]
    outer: Tuple[ConMorphism, ConMorphism]


@dataclass(frozen=True)
class Composite:
    """What a chain of two classes composes to.

    ``kind`` is ``"class"`` (``index`` names the class, ``flip`` whether its
    ends run against the chain), ``"identity"`` or ``"automorphism"``.
    """

    kind: str
    index: int = -1
    flip: bool = False


@dataclass(frozen=True)
class ComGraph:
    """Composites of every gluing of two classes and the action of automorphisms on classes."""

    classes: Tuple[DaggerMor, ...]
    chains: Mapping[Tuple[int, int, int, int], Optional[Composite]]
    actions: Mapping[Tuple[int, int, str], int] = field(default_factory=dict)

    def chained(self, a: int, ia: int, b: int, ib: int) -> bool:
        return self.chains.get((a, ia, b, ib)) is not None


@dataclass(frozen=True)
class DaggerData:
    dagger_ob: Tuple[Key, ...]
    dagger_aut: Mapping[Key, AutData]
    dagger_mor: Mapping[Tuple[Key, Key], Tuple[DaggerMor, ...]]
    dagger_id: Mapping[Key, DaggerMor] = field(default_factory=dict)
    com: Optional[ComGraph] = None


@dataclass(frozen=True)
class ComparisonVerdict:
    equivalent: bool
    op_equivalent: bool
    witnesses: Mapping[str, FunctorData] = field(default_factory=dict)


@dataclass(frozen=True)
class RoundtripResult:
    passed: bool
    matches: Optional[str]  # "X", "X^op" or None
    assembled: FiniteCategory
    orientation: str
    fragment_objects: int
    minimal_objects: int
    timings_ms: Mapping[str, float]
    witness: Optional[FunctorData] = None


def _check_bounds(X: FiniteCategory) -> FiniteCategory:
    if not is_connected(X):
        raise NotConnected(f"{X.name} is not connected")
    settings = get_settings()
    sk, _inclusion = skeleton(X)
    if len(sk.objects) > settings.max_objects or len(X.morphisms) > settings.max_morphisms:
        raise SizeBound(
            f"{X.name} has {len(sk.objects)} skeleton object(s) and {len(X.morphisms)} morphism(s); "
            f"bounds are {settings.max_objects} and {settings.max_morphisms}"
        )
    return sk


def shuffle_fragment(
    X: FiniteCategory,
    built: Sequence[Tuple[Provenance, ConstructiveFunctor]],
    coproducts: Cocones,
    pushouts: Sequence[Cocone],
    seed: Optional[int] = None,
    budget: Optional[int] = None,
) -> Fragment:
    """Hide how each object was built behind shuffled opaque keys."""

    rng = random.Random(get_settings().seed if seed is None else seed)
    positions = list(range(len(built)))
    rng.shuffle(positions)
    keys = {positions[n]: f"K{n}" for n in range(len(built))}
    by_provenance = {built[i][0]: keys[i] for i in range(len(built))}

    coproduct_table = {}
    for (first, second), (colimit, left, right) in coproducts.items():
        a, b, c = by_provenance[first], by_provenance[second], by_provenance[colimit]
        coproduct_table[(a, b)] = (c, left, right)
        if a != b:
            coproduct_table[(b, a)] = (c, right, left)

    pushout_table: Dict[Tuple[Key, Key], List[Cocone]] = {}
    for cocone in pushouts:
        keyed = replace(
            cocone,
            first=by_provenance[cocone.first],
            second=by_provenance[cocone.second],
            middle=by_provenance[cocone.middle],
            colimit=by_provenance[cocone.colimit],
        )
        for entry in (keyed, keyed.swapped()):
            pushout_table.setdefault((entry.first, entry.second), []).append(entry)

    return Fragment(
        base=X,
        objects={keys[i]: built[i][1] for i in range(len(built))},
        order=[f"K{n}" for n in range(len(built))],
        coproducts=coproduct_table,
        pushouts=pushout_table,
        provenance={key: provenance for provenance, key in by_provenance.items()},
        budget=budget,
    )


def end_pairs(ends: Tuple[ObjId, ObjId], ends2: Tuple[ObjId, ObjId], same: bool) -> List[Tuple[int, int]]:
    """Copy pairs at which two links can be glued, once per unordered gluing."""

    pairs = [(i, j) for i in (0, 1) for j in (0, 1) if ends[i] == ends2[j]]
    if same:
        pairs = [(i, j) for i, j in pairs if i < j]
    return pairs


def build_fragment(X: FiniteCategory, seed: Optional[int] = None, budget: Optional[int] = None) -> Fragment:
    """Point covers, bridges, identity links, coproducts, pushouts and the empty object, shuffled.

    A pushout is built for every pair of bridges at every pair of copies over
    the same groupoid, and its universal property is checked against the
    other objects of the fragment.
    """

    sk = _check_bounds(X)
    reps = sorted(sk.objects)
    built: List[Tuple[Provenance, ConstructiveFunctor]] = [(("empty",), empty_constructive(X))]
    covers = {e: point_cover(X, e) for e in reps}
    built.extend((("point", e), covers[e]) for e in reps)

    bridges: Dict[MorId, Bridge] = {}
    for i, e in enumerate(reps):
        for e2 in reps[i:]:
            for v in sorted(mor_brace_noninv(X, e, e2)):
                bridges[v] = bridge(X, v, e, e2, allow_endo=True)
                built.append((("bridge", v), bridges[v].functor))
    built.extend((("identity", e), identity_link(X, e).functor) for e in reps)

    coproducts = {}
    for i, e in enumerate(reps):
        for e2 in reps[i:]:
            data = con_coproduct(covers[e], covers[e2])
            built.append((("coproduct", e, e2), data.obj))
            coproducts[(("point", e), ("point", e2))] = (("coproduct", e, e2), data.left, data.right)

    base_part = [F for _provenance, F in built]
    homs = HomCache(budget)
    pushouts: List[Cocone] = []
    names = sorted(bridges)
    for n, v in enumerate(names):
        for v2 in names[n:]:
            first, second = bridges[v], bridges[v2]
            for i, j in end_pairs(first.ends, second.ends, v == v2):
                try:
                    data = pushout_bridges(first, second, base_part, at=(i, j), homs=homs)
                except NoColimit as exc:
                    logging.debug("No pushout of %s@%d and %s@%d: %s", v, i, v2, j, exc)
                    continue
                provenance = ("pushout", f"{v}@{i}", f"{v2}@{j}")
                built.append((provenance, data.obj))
                pushouts.append(
                    Cocone(
                        ("bridge", v),
                        ("bridge", v2),
                        ("point", first.ends[i]),
                        (bridge_end(first, i), bridge_end(second, j)),
                        provenance,
                        (data.left, data.right),
                    )
                )

    fragment = shuffle_fragment(X, built, coproducts, pushouts, seed=seed, budget=budget)
    logging.info(
        "Built fragment over %s: %d object(s), %d bridge(s), %d pushout(s)",
        X.name,
        len(built),
        len(bridges),
        len(pushouts),
    )
    return fragment


def detect_minimal(fragment: Fragment) -> Tuple[Key, ...]:
    """Non-initial objects every monomorphism into which, from a non-initial object, is invertible."""

    initial = {k for k in fragment.order if fragment.is_initial(k)}
    smallest_first = [k for k in fragment.by_size() if k not in initial]
    minimal = []
    for k in fragment.order:
        if k in initial:
            continue
        if all(
            is_con_iso(phi)
            for j in smallest_first
            for phi in fragment.homs(j, k)
            if fragment.is_mono(j, phi)
        ):
            minimal.append(k)
    logging.debug("Minimal objects: %s", minimal)
    return tuple(minimal)


def _require_minimal(minimal: Sequence[Key], *keys: Key) -> None:
    for key in keys:
        if key not in minimal:
            raise NotMinimal(f"{key} is not a minimal object of the fragment")


def dagger_aut(fragment: Fragment, M: Key, minimal: Optional[Sequence[Key]] = None) -> AutData:
    """The automorphism group of ``M`` inside the fragment."""

    _require_minimal(detect_minimal(fragment) if minimal is None else minimal, M)
    autos = [phi for phi in fragment.homs(M, M) if is_con_iso(phi)]
    autos.sort(key=lambda phi: any(a != b for a, b in phi.functor.object_map.items()))
    names = [f"g{i}" for i in range(len(autos))]
    by_signature = {_signature(phi): name for name, phi in zip(names, autos)}
    product = {
        (a, b): by_signature[_signature(compose_con(phi, psi))]
        for a, phi in zip(names, autos)
        for b, psi in zip(names, autos)
    }
    group = GroupTable(tuple(names), names[0], product)
    return AutData(M, group, {name: AutElement(M, name, phi) for name, phi in zip(names, autos)})


def _injection(fragment: Fragment, ends: Tuple[Key, Key], index: int) -> ConMorphism:
    return fragment.coproducts[ends][1 + index]


def _end_of(fragment: Fragment, dm: DaggerMor, index: int) -> ConMorphism:
    """``Υ ∘ inj_index``: where end ``index`` sits inside the representative."""

    return compose_con(dm.upsilon, _injection(fragment, dm.ends, index))


def _factors_all_points(fragment: Fragment, coproduct: Key, upsilon: ConMorphism, target: Key, minimal: Sequence[Key]) -> bool:
    for m in minimal:
        for phi in fragment.homs(m, target):
            if not any(same_morphism(compose_con(upsilon, psi), phi) for psi in fragment.homs(m, coproduct)):
                return False
    return True


def _decomposable(fragment: Fragment, key: Key) -> bool:
    return any(
        is_con_iso(phi) for (c, _left, _right) in fragment.coproducts.values() for phi in fragment.homs(key, c)
    )


def _inclusion(fragment: Fragment, coproduct: Key, key: Key) -> Optional[ConMorphism]:
    """The morphism out of ``coproduct`` that keeps every object name, if ``key`` has one."""

    names = set(fragment.objects[key].total.objects)
    if not set(fragment.objects[coproduct].total.objects) <= names:
        return None
    for phi in fragment.homs(coproduct, key):
        if all(a == b for a, b in phi.functor.object_map.items()):
            return phi
    return None


def _below(fragment: Fragment, lower: DaggerMor, upper: DaggerMor) -> bool:
    """A non-invertible mono ``ψ`` with ``ψ ∘ Υ_lower = Υ_upper``."""

    return any(
        not is_con_iso(psi) and fragment.is_mono(lower.target, psi) and same_morphism(compose_con(psi, lower.upsilon), upper.upsilon)
        for psi in fragment.homs(lower.target, upper.target)
    )


def _comma_isomorphic(fragment: Fragment, first: Key, upsilon: ConMorphism, second: DaggerMor, swaps: Sequence[ConMorphism] = ()) -> bool:
    targets = [second.upsilon] + [compose_con(second.upsilon, sigma) for sigma in swaps]
    return any(
        is_con_iso(psi) and any(same_morphism(compose_con(psi, upsilon), t) for t in targets)
        for psi in fragment.homs(first, second.target)
    )


def _candidates(fragment: Fragment, ends: Tuple[Key, Key], minimal: Sequence[Key]) -> List[DaggerMor]:
    """Indecomposable targets of a non-invertible mono inclusion of ``M ⊔ M2`` through which every point factors."""

    coproduct = fragment.coproducts[ends][0]
    found = []
    for key in fragment.order:
        upsilon = _inclusion(fragment, coproduct, key)
        if upsilon is None or is_con_iso(upsilon):
            continue
        if fragment.is_initial(key) or _decomposable(fragment, key):
            continue
        if fragment.is_mono(coproduct, upsilon) and _factors_all_points(fragment, coproduct, upsilon, key, minimal):
            found.append(DaggerMor(ends, key, upsilon))
    return found


def dagger_mor(
    fragment: Fragment,
    M: Key,
    M2: Key,
    minimal: Optional[Sequence[Key]] = None,
    keep_folds: bool = False,
) -> Tuple[DaggerMor, ...]:
    """Classes of minimal indecomposable non-invertible monos ``Υ: M ⊔ M2 -> F`` through which every point of ``F`` factors.

    Representatives are the inclusions that keep object names.  Unless
    ``keep_folds`` is set, a target that maps back onto ``M`` (an identity
    link) is left out.
    """

    minimal = detect_minimal(fragment) if minimal is None else minimal
    _require_minimal(minimal, M, M2)
    ends = (M, M2)
    coproduct, left, right = fragment.coproducts[ends]
    swaps: List[ConMorphism] = []
    if M == M2:
        sigma = fragment.find(coproduct, coproduct, (left, right), (right, left))
        swaps = [sigma] if sigma is not None else []
    candidates = _candidates(fragment, ends, minimal)
    if M == M2 and not keep_folds:
        candidates = [c for c in candidates if not fragment.homs(c.target, M)]
    least = [c for c in candidates if not any(d is not c and _below(fragment, d, c) for d in candidates)]
    classes: List[DaggerMor] = []
    for c in least:
        if not any(_comma_isomorphic(fragment, c.target, c.upsilon, d, swaps) for d in classes):
            classes.append(c)
    logging.debug("%d morphism class(es) between %s and %s", len(classes), M, M2)
    return tuple(classes)


def dagger_id(fragment: Fragment, M: Key, minimal: Optional[Sequence[Key]] = None) -> DaggerMor:
    """The link of two copies of ``M`` that folds back onto ``M`` along both ends."""

    minimal = detect_minimal(fragment) if minimal is None else minimal
    _require_minimal(minimal, M)
    identity = identity_con(fragment.objects[M])
    for c in _candidates(fragment, (M, M), minimal):
        if fragment.find(c.target, M, (_end_of(fragment, c, 0), identity), (_end_of(fragment, c, 1), identity)):
            return c
    raise LawViolation(f"no identity link at {M}")


def compose_with_aut(
    fragment: Fragment,
    u: AutElement,
    first: DaggerMor,
    second: DaggerMor,
    end: Optional[int] = None,
) -> bool:
    """Whether ``(F₂, Υ₂)`` is ``(F₁, Υ₁ ∘ (Φ_u ⊔ id))`` up to comma isomorphism.

    ``Φ_u`` acts on end ``end`` of the coproduct, or on any end at ``u``'s
    object when ``end`` is None.
    """

    if first.ends != second.ends or u.obj not in first.ends:
        return False
    coproduct, left, right = fragment.coproducts[first.ends]
    injections = (left, right)
    for index in (0, 1):
        if first.ends[index] != u.obj or end not in (None, index):
            continue
        chi = fragment.find(
            coproduct,
            coproduct,
            (injections[index], compose_con(injections[index], u.morphism)),
            (injections[1 - index], injections[1 - index]),
        )
        if chi is not None and _comma_isomorphic(fragment, first.target, compose_con(first.upsilon, chi), second):
            return True
    return False


def glue(fragment: Fragment, first: DaggerMor, i: int, second: DaggerMor, j: int) -> Optional[Gluing]:
    """The stored pushout of ``first`` and ``second`` along their ends ``i`` and ``j``."""

    if first.ends[i] != second.ends[j]:
        return None
    cocone = fragment.pushout(first.target, _end_of(fragment, first, i), second.target, _end_of(fragment, second, j))
    if cocone is None:
        return None
    to_first, to_second = cocone.maps
    return Gluing(
        cocone.colimit,
        (first.ends[1 - i], second.ends[1 - j]),
        (compose_con(to_first, _end_of(fragment, first, 1 - i)), compose_con(to_second, _end_of(fragment, second, 1 - j))),
    )


def _placements(fragment: Fragment, dm: DaggerMor, gluing: Gluing) -> List[Tuple[ConMorphism, ConMorphism]]:
    """Where the two ends of ``dm`` land under each mono of ``dm`` into the gluing."""

    return [
        (compose_con(psi, _end_of(fragment, dm, 0)), compose_con(psi, _end_of(fragment, dm, 1)))
        for psi in fragment.homs(dm.target, gluing.colimit)
        if fragment.is_mono(dm.target, psi)
    ]


def embedding(fragment: Fragment, dm: DaggerMor, gluing: Gluing) -> Optional[bool]:
    """``False`` when ``dm`` embeds with its ends on the outer ends in order, ``True`` when swapped."""

    for flip in (False, True):
        if (dm.ends[::-1] if flip else dm.ends) != gluing.objects:
            continue
        outer = gluing.outer[::-1] if flip else gluing.outer
        for placed in _placements(fragment, dm, gluing):
            if same_morphism(placed[0], outer[0]) and same_morphism(placed[1], outer[1]):
                return flip
    return None


def _closes_up(fragment: Fragment, unit: DaggerMor, gluing: Gluing, aut: AutData) -> Optional[str]:
    """``"identity"`` when the identity link embeds on the outer ends, ``"automorphism"`` when it does after twisting one end."""

    M = unit.ends[0]
    if gluing.objects != (M, M):
        return None
    twists = [identity_con(fragment.objects[M])] + [u.morphism for u in aut.elements.values()]
    orders = (gluing.outer, gluing.outer[::-1])
    twisted = False
    for p0, p1 in _placements(fragment, unit, gluing):
        for o0, o1 in orders:
            if same_morphism(p0, o0) and same_morphism(p1, o1):
                return "identity"
            twisted = twisted or any(
                same_morphism(p0, compose_con(o0, a)) and same_morphism(p1, compose_con(o1, b))
                for a in twists
                for b in twists
            )
    return "automorphism" if twisted else None


def compose_bridges(fragment: Fragment, first: DaggerMor, second: DaggerMor, third: DaggerMor) -> bool:
    """Whether ``F₃`` embeds in a pushout of ``F₁`` and ``F₂`` at a shared end, compatibly with the outer ends."""

    for i in (0, 1):
        for j in (0, 1):
            gluing = glue(fragment, first, i, second, j)
            if gluing is not None and embedding(fragment, third, gluing) is not None:
                return True
    return False


def recover_daggers(fragment: Fragment) -> DaggerData:
    minimal = detect_minimal(fragment)
    auts = {M: dagger_aut(fragment, M, minimal) for M in minimal}
    mors = {}
    for i, M in enumerate(minimal):
        for M2 in minimal[i:]:
            classes = dagger_mor(fragment, M, M2, minimal)
            if classes:
                mors[(M, M2)] = classes
    units = {M: dagger_id(fragment, M, minimal) for M in minimal}
    logging.info(
        "Recovered %d minimal object(s), %d automorphism(s), %d morphism class(es)",
        len(minimal),
        sum(a.group.order for a in auts.values()),
        sum(len(c) for c in mors.values()),
    )
    return DaggerData(tuple(minimal), auts, mors, units)


def _composite(fragment: Fragment, daggers: DaggerData, classes: Sequence[DaggerMor], gluing: Gluing) -> Optional[Composite]:
    found = []
    for w, W in enumerate(classes):
        flip = embedding(fragment, W, gluing)
        if flip is not None:
            found.append(Composite("class", w, flip))
    M = gluing.objects[0]
    if not found and gluing.objects[1] == M and M in daggers.dagger_id:
        kind = _closes_up(fragment, daggers.dagger_id[M], gluing, daggers.dagger_aut[M])
        if kind is not None:
            found.append(Composite(kind))
    if len(found) > 1:
        raise LawViolation(f"gluing into {gluing.colimit} has more than one composite")
    return found[0] if found else None


def _actions(fragment: Fragment, daggers: DaggerData, classes: Sequence[DaggerMor]) -> Dict[Tuple[int, int, str], int]:
    """For each class, end and automorphism of that end, the class it is moved to."""

    actions = {}
    for c, C in enumerate(classes):
        for end in (0, 1):
            aut = daggers.dagger_aut.get(C.ends[end])
            if aut is None:
                continue
            for name, u in aut.elements.items():
                moved = [
                    d for d, D in enumerate(classes) if D.ends == C.ends and compose_with_aut(fragment, u, C, D, end=end)
                ]
                if len(moved) != 1:
                    raise LawViolation(f"automorphism {name} moves a class to {len(moved)} class(es)")
                actions[(c, end, name)] = moved[0]
    return actions


def recover_composition(fragment: Fragment, daggers: Optional[DaggerData] = None) -> DaggerData:
    """Glue every pair of classes at every shared end and find their composite inside the fragment."""

    daggers = daggers or recover_daggers(fragment)
    classes = tuple(dm for group in daggers.dagger_mor.values() for dm in group)
    chains: Dict[Tuple[int, int, int, int], Optional[Composite]] = {}
    for a, A in enumerate(classes):
        for ia in (0, 1):
            for b, B in enumerate(classes):
                for ib in (0, 1):
                    if A.ends[ia] != B.ends[ib] or (a == b and ia == ib):
                        continue
                    gluing = glue(fragment, A, ia, B, ib)
                    if gluing is None:
                        raise NoColimit(f"no stored pushout for classes {a} and {b} at ends {ia} and {ib}")
                    chains[(a, ia, b, ib)] = _composite(fragment, daggers, classes, gluing)
    actions = _actions(fragment, daggers, classes)
    logging.debug("Glued %d class pair(s), %d chained", len(chains), sum(1 for c in chains.values() if c))
    return replace(daggers, com=ComGraph(classes, chains, actions))


def orient(daggers: DaggerData, flip: bool = False) -> Dict[int, bool]:
    """Per class, whether it runs from end 1 to end 0.

    Two classes glued at ends ``ia``, ``ib`` are chained exactly when one
    enters the shared object and the other leaves it; that fixes their
    relative orientation.  The first class between distinct objects is the
    reference.
    """

    classes = daggers.com.classes
    graph = nx.Graph()
    graph.add_nodes_from(range(len(classes)))
    constraints = []
    for (a, ia, b, ib), found in daggers.com.chains.items():
        parity = (found is not None) ^ bool(ia) ^ bool(ib)
        constraints.append((a, b, parity))
        if a != b and not graph.has_edge(a, b):
            graph.add_edge(a, b, parity=parity)
    if not classes:
        return {}
    root = next((i for i, C in enumerate(classes) if C.ends[0] != C.ends[1]), 0)
    reversed_ = {root: flip}
    for parent, child in nx.bfs_edges(graph, root):
        reversed_[child] = reversed_[parent] ^ graph.edges[parent, child]["parity"]
    if len(reversed_) != len(classes):
        raise InconsistentOrientation("classes do not form a connected graph")
    for a, b, parity in constraints:
        if reversed_[a] ^ reversed_[b] != parity:
            raise InconsistentOrientation(f"classes {a} and {b} cannot both be oriented")
    logging.info("Orientation fixed from class %d", root)
    return reversed_


def _is_unit(com: ComGraph, i: int) -> bool:
    """Gluing class ``i`` to any other class, in either position, gives back that class."""

    return all(
        found.kind == "class" and found.index == (b if a == i else a)
        for (a, _ia, b, _ib), found in com.chains.items()
        if found is not None and i in (a, b)
    )


def class_names(daggers: DaggerData) -> Dict[int, MorId]:
    names = {}
    for i, dm in enumerate(daggers.com.classes):
        n = daggers.dagger_mor[dm.ends].index(dm)
        names[i] = f"{dm.ends[0]}~{dm.ends[1]}.{n}"
    return names


def _aut_name(M: Key, element: str) -> MorId:
    return f"{M}.{element}"


def assemble(daggers: DaggerData, flip: bool = False) -> Tuple[FiniteCategory, str]:
    """Build the recovered category; ``flip`` reverses the reference class and yields the opposite.

    Automorphisms compose by their group table, act on classes by the
    recorded actions, and two classes compose to the class, identity or
    automorphism their gluing closes up to.
    """

    com = daggers.com
    classes = com.classes
    reversed_ = orient(daggers, flip)
    dom_end = {i: 1 if reversed_[i] else 0 for i in range(len(classes))}
    cod_end = {i: 1 - dom_end[i] for i in dom_end}
    names = class_names(daggers)
    ends: Dict[MorId, Tuple[Key, Key]] = {}
    identity: Dict[Key, MorId] = {}
    table: Dict[Tuple[MorId, MorId], MorId] = {}
    for M, aut in daggers.dagger_aut.items():
        group = aut.group
        for g in group.elements:
            ends[_aut_name(M, g)] = (M, M)
        identity[M] = _aut_name(M, group.identity)
        for a in group.elements:
            for b in group.elements:
                table[(_aut_name(M, a), _aut_name(M, b))] = _aut_name(M, group.multiply(a, b))
    for i, C in enumerate(classes):
        ends[names[i]] = (C.ends[dom_end[i]], C.ends[cod_end[i]])
        if C.ends[0] == C.ends[1] and C.ends[0] not in identity and _is_unit(com, i):
            identity[C.ends[0]] = names[i]
    missing = [M for M in daggers.dagger_ob if M not in identity]
    if missing:
        raise LawViolation(f"no identity at {missing[0]}")

    for i, C in enumerate(classes):
        source, target = ends[names[i]]
        if source in daggers.dagger_aut:
            for g in daggers.dagger_aut[source].group.elements:
                table[(names[i], _aut_name(source, g))] = names[com.actions[(i, dom_end[i], g)]]
        if target in daggers.dagger_aut:
            group = daggers.dagger_aut[target].group
            for g in group.elements:
                table[(_aut_name(target, g), names[i])] = names[com.actions[(i, cod_end[i], group.inverse(g))]]

    for i in range(len(classes)):
        for j in range(len(classes)):
            if ends[names[i]][1] != ends[names[j]][0]:
                continue
            found = com.chains.get((i, cod_end[i], j, dom_end[j]))
            if found is None:
                raise InconsistentOrientation(f"{names[j]} ∘ {names[i]} has no composite")
            if found.kind == "class":
                if dom_end[found.index] != (1 if found.flip else 0):
                    raise InconsistentOrientation(f"composite of {names[j]} ∘ {names[i]} runs backwards")
                table[(names[j], names[i])] = names[found.index]
            else:
                table[(names[j], names[i])] = _resolve_invertible(daggers, dom_end, cod_end, i, j)

    assembled = build_category("Recovered", daggers.dagger_ob, ends, table, identity)
    violations = check_laws(assembled)
    if violations:
        raise LawViolation(f"recovered category breaks a law: {violations[0]}", violations)
    return assembled, "global_op" if flip else "global"


def _resolve_invertible(daggers: DaggerData, dom_end: Mapping[int, int], cod_end: Mapping[int, int], i: int, j: int) -> MorId:
    """The automorphism ``a`` with ``j ∘ i = a``: the one whose inverse applied to ``j`` makes the chain an identity."""

    com = daggers.com
    M = com.classes[i].ends[dom_end[i]]
    group = daggers.dagger_aut[M].group
    found = []
    for g in group.elements:
        moved = com.actions[(j, cod_end[j], g)]
        chain = com.chains.get((i, cod_end[i], moved, dom_end[moved]))
        if chain is not None and chain.kind == "identity":
            found.append(g)
    if len(found) != 1:
        raise LawViolation(f"a chain closing up at {M} matches {len(found)} automorphism(s)")
    return _aut_name(M, found[0])


def compare(X: FiniteCategory, X2: FiniteCategory, budget: Optional[int] = None) -> ComparisonVerdict:
    for C in (X, X2):
        if not is_connected(C):
            raise NotConnected(f"{C.name} is not connected")
    witnesses = {}
    direct = equivalence_witness(X, X2, budget=budget)
    if direct is not None:
        witnesses["equivalent"] = direct
    dual = equivalence_witness(opposite(X), X2, budget=budget)
    if dual is not None:
        witnesses["op_equivalent"] = dual
    return ComparisonVerdict(direct is not None, dual is not None, witnesses)


def recover(fragment: Fragment) -> DaggerData:
    return recover_composition(fragment, recover_daggers(fragment))


def roundtrip(X: FiniteCategory, seed: Optional[int] = None, budget: Optional[int] = None) -> RoundtripResult:
    """Rebuild ``X`` from its fragment and compare against ``X`` and ``X^op``."""

    timings: Dict[str, float] = {}
    started = time.perf_counter()
    fragment = build_fragment(X, seed=seed, budget=budget)
    timings["fragment"] = (time.perf_counter() - started) * 1000
    started = time.perf_counter()
    daggers = recover(fragment)
    timings["recover"] = (time.perf_counter() - started) * 1000
    started = time.perf_counter()
    assembled, orientation = assemble(daggers)
    timings["assemble"] = (time.perf_counter() - started) * 1000
    started = time.perf_counter()
    matches, witness = None, equivalence_witness(assembled, X, budget=budget)
    if witness is not None:
        matches = "X"
    else:
        witness = equivalence_witness(assembled, opposite(X), budget=budget)
        matches = "X^op" if witness is not None else None
    timings["compare"] = (time.perf_counter() - started) * 1000
    logging.info("Roundtrip of %s: %s", X.name, matches or "no match")
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


def base_object(fragment: Fragment, M: Key) -> ObjId:
    """The object of ``X`` a minimal fragment object was built over (oracle only)."""

    kind, *rest = fragment.provenance[M]
    if kind != "point":
        raise NotMinimal(f"{M} was not built as a point cover")
    return rest[0]


def base_automorphism(fragment: Fragment, u: AutElement) -> MorId:
    """The ``w`` with ``u = Φ_w`` (oracle only)."""

    X = fragment.base
    e = base_object(fragment, u.obj)
    cover = fragment.objects[u.obj]
    image = u.morphism.functor.object_map[cover_object(e, X.identity[e])]
    _a, x = cover.payload[image]
    return inverse_of(X, x)


def base_morphism(fragment: Fragment, dm: DaggerMor) -> MorId:
    """The non-invertible morphism whose bridge represents ``dm`` (oracle only)."""

    kind, *rest = fragment.provenance[dm.target]
    if kind != "bridge":
        raise LawViolation(f"{dm.target} was not built as a bridge")
    return rest[0]
