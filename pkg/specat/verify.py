"""The check battery: every law the toolkit relies on, evaluated against brute-force oracles on a corpus."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .catcore import (
    FiniteCategory,
    automorphism_group,
    check_laws,
    groupoid_component,
    inverse_of,
    is_connected,
    is_isomorphism,
    maximal_groupoids,
    mor_brace,
    mor_brace_noninv,
    opposite,
    skeleton,
    validate_category,
)
from .catover import (
    base_arrow,
    build_cat_fragment,
    compare_strict,
    compose_arrows_cat,
    dagger_mor_cat,
    detect_minimal_cat,
    recover_cat,
    roundtrip_strict,
    terminal_is_terminal,
)
from .constructive import (
    ConstructiveFunctor,
    con_coproduct,
    empty_constructive,
    enumerate_con_morphisms,
    ev,
    fiber_functor_count,
    groupoid_category,
    hom_count,
    is_con_iso,
    is_groupoid_cover_iso,
    pushforward_groupoid,
    restrict_to_groupoid,
    universal_cover,
)
from .corpus import constant_species, fixture
from .docfile import from_category, serialize
from .errors import SpecatError
from .functcore import find_group_isomorphism
from .reconstruct import (
    DaggerData,
    DaggerMor,
    Fragment,
    assemble,
    base_automorphism,
    base_morphism,
    base_object,
    build_fragment,
    compare,
    compose_bridges,
    compose_with_aut,
    detect_minimal,
    recover,
    recover_daggers,
    roundtrip,
    shuffle_fragment,
)
from .species import finite_sets, realize, topology_species, validate_species

Outcome = Tuple[bool, str, Dict[str, Any]]


class Subject:
    """One corpus category with its fragments computed once and shared by every check."""

    def __init__(self, X: FiniteCategory, seed: Optional[int] = None, budget: Optional[int] = None) -> None:
        self.X = X
        self.seed = seed
        self.budget = budget

    @cached_property
    def fragment(self) -> Fragment:
        return build_fragment(self.X, seed=self.seed, budget=self.budget)

    @cached_property
    def minimal(self) -> Tuple[str, ...]:
        return detect_minimal(self.fragment)

    @cached_property
    def daggers(self) -> DaggerData:
        return recover_daggers(self.fragment)

    @cached_property
    def recovered(self) -> DaggerData:
        return recover(self.fragment)

    @cached_property
    def representatives(self) -> List[str]:
        return sorted(skeleton(self.X)[0].objects)

    @cached_property
    def cat_fragment(self) -> Fragment:
        return build_cat_fragment(self.X, seed=self.seed, budget=self.budget)

    @cached_property
    def cat_daggers(self) -> DaggerData:
        return recover_cat(self.cat_fragment)

    def point(self, e: str) -> str:
        return self.fragment.key_of("point", e)


def _ok(detail: str = "", **inputs: Any) -> Outcome:
    return True, detail, inputs


def _bad(detail: str, **inputs: Any) -> Outcome:
    return False, detail, inputs


def _nonempty(fragment: Fragment) -> List[str]:
    return [k for k in fragment.order if fragment.objects[k].total.objects]


# Category and species data


def check_validators(s: Subject) -> Iterable[Outcome]:
    X = s.X
    violations = check_laws(X)
    yield (not violations, "; ".join(violations), {"category": X.name})
    again = validate_category(X.describe())
    yield (again.same_table(X), "re-validated table differs", {"category": X.name})
    sigma = validate_species(constant_species(X))
    F = realize(sigma)
    expected = 2 * len(X.objects)
    if len(F.total.objects) != expected:
        yield _bad(f"realized {len(F.total.objects)} object(s), expected {expected}", species=sigma.name)
    else:
        yield _ok(species=sigma.name)


def check_covers_surjective(s: Subject) -> Iterable[Outcome]:
    fragment = s.fragment
    for e in s.representatives:
        M = s.point(e)
        target = fragment.objects[M].total
        for k in _nonempty(fragment):
            for phi in fragment.homs(k, M):
                objects = set(phi.functor.object_map.values()) == set(target.objects)
                morphisms = set(phi.functor.morphism_map.values()) == set(target.morphisms)
                yield (objects and morphisms, "morphism into a cover is not surjective", {"point": e, "source": k})


def check_cover_hom_counts(s: Subject) -> Iterable[Outcome]:
    fragment = s.fragment
    for e in s.representatives:
        M = s.point(e)
        cover = fragment.objects[M]
        for k in fragment.order:
            F = fragment.objects[k]
            count, fiber = len(fragment.homs(M, k)), fiber_functor_count(F, e)
            yield (count == fiber, f"{count} morphism(s) but {fiber} fiber point(s)", {"point": e, "target": k})
            if fragment.provenance[k][0] == "point":
                ev(cover, F, e)


def check_cover_endomorphisms(s: Subject) -> Iterable[Outcome]:
    fragment = s.fragment
    for e in s.representatives:
        M = s.point(e)
        for phi in fragment.homs(M, M):
            yield (is_groupoid_cover_iso(phi), "non-invertible endomorphism", {"point": e})


def check_cover_monos(s: Subject) -> Iterable[Outcome]:
    fragment = s.fragment
    for e in s.representatives:
        M = s.point(e)
        for k in _nonempty(fragment):
            for phi in fragment.homs(k, M):
                if fragment.is_mono(k, phi):
                    yield (is_groupoid_cover_iso(phi), "non-invertible monomorphism", {"point": e, "source": k})


def check_groupoid_adjunction(s: Subject) -> Iterable[Outcome]:
    fragment = s.fragment
    for G in maximal_groupoids(s.X):
        e = min(G.objects)
        H = universal_cover(groupoid_category(G), e)
        pushed = pushforward_groupoid(G, H)
        for k in fragment.order:
            F = fragment.objects[k]
            left, right = hom_count(pushed, F), hom_count(H, restrict_to_groupoid(G, F))
            yield (left == right, f"{left} != {right}", {"groupoid": e, "object": k})
        back = restrict_to_groupoid(G, pushed)
        yield (
            any(is_con_iso(phi) for phi in enumerate_con_morphisms(H, back)),
            "restricting the pushforward does not give the cover back",
            {"groupoid": e},
        )


def check_pushforward_minimality(s: Subject) -> Iterable[Outcome]:
    """Minimality of the cover and its double inside the groupoid agrees with minimality after pushforward."""

    for e in s.representatives:
        base = groupoid_category(groupoid_component(s.X, e))
        H = universal_cover(base, e)
        local = shuffle_fragment(
            base,
            [(("empty",), empty_constructive(base)), (("point", e), H), (("coproduct", e, e), con_coproduct(H, H).obj)],
            {},
            [],
            seed=s.seed,
            budget=s.budget,
        )
        local_minimal = set(detect_minimal(local))
        for provenance in (("point", e), ("coproduct", e, e)):
            inside = local.key_of(*provenance) in local_minimal
            outside = s.fragment.key_of(*provenance) in s.minimal
            yield (inside == outside, f"{provenance[0]} minimal {inside} over the groupoid, {outside} over X", {"point": e})


# Reconstruction over constructive functors


def check_minimal_objects(s: Subject) -> Iterable[Outcome]:
    expected = {s.point(e) for e in s.representatives}
    found = set(s.minimal)
    yield (found == expected, f"found {len(found)} minimal object(s), expected {len(expected)}", {})


def check_automorphism_groups(s: Subject) -> Iterable[Outcome]:
    for M, aut in s.daggers.dagger_aut.items():
        e = base_object(s.fragment, M)
        expected = automorphism_group(s.X, e)
        witness = find_group_isomorphism(aut.group, expected)
        yield (witness is not None, f"group of order {aut.group.order} vs Aut({e}) of order {expected.order}", {"point": e})
        images = {base_automorphism(s.fragment, u) for u in aut.elements.values()}
        yield (images == set(expected.elements), "automorphisms do not come from distinct deck maps", {"point": e})


def _class_pairs(daggers: DaggerData) -> Iterable[Tuple[str, str, Sequence[DaggerMor]]]:
    minimal = daggers.dagger_ob
    for i, M in enumerate(minimal):
        for M2 in minimal[i:]:
            yield M, M2, daggers.dagger_mor.get((M, M2), ())


def check_bridge_classes(s: Subject) -> Iterable[Outcome]:
    for M, M2, classes in _class_pairs(s.daggers):
        e, e2 = base_object(s.fragment, M), base_object(s.fragment, M2)
        expected = mor_brace_noninv(s.X, e, e2)
        found = {base_morphism(s.fragment, dm) for dm in classes}
        yield (
            len(classes) == len(expected) and found == set(expected),
            f"{len(classes)} class(es), expected {sorted(expected)}",
            {"from": e, "to": e2},
        )


def _side(s: Subject, dm: DaggerMor, index: int) -> str:
    """Whether end ``index`` of a class is the domain or the codomain of its morphism."""

    X = s.X
    v = base_morphism(s.fragment, dm)
    if X.dom[v] == X.cod[v]:
        # copy 0 of an endomorphism's bridge is its domain
        return "dom" if index == 0 else "cod"
    return "dom" if X.dom[v] == base_object(s.fragment, dm.ends[index]) else "cod"


def _aut_oracle(X: FiniteCategory, w: str, v1: str, v2: str, side: str) -> bool:
    if side == "dom":
        return X.table[(v1, w)] == v2
    return X.table[(inverse_of(X, w), v1)] == v2


def check_aut_composition(s: Subject) -> Iterable[Outcome]:
    fragment, daggers = s.fragment, s.daggers
    for ends, classes in daggers.dagger_mor.items():
        for index, obj in enumerate(ends):
            for u in daggers.dagger_aut[obj].elements.values():
                w = base_automorphism(fragment, u)
                for dm1 in classes:
                    for dm2 in classes:
                        v1, v2 = base_morphism(fragment, dm1), base_morphism(fragment, dm2)
                        found = compose_with_aut(fragment, u, dm1, dm2, end=index)
                        expected = _aut_oracle(s.X, w, v1, v2, _side(s, dm1, index))
                        yield (
                            found == expected,
                            f"criterion {found}, table {expected}",
                            {"aut": w, "first": v1, "second": v2, "end": index},
                        )


def _triples(daggers: DaggerData) -> Iterable[Tuple[DaggerMor, DaggerMor, DaggerMor]]:
    """Every pair of classes sharing an end, with every class joining two of their outer ends."""

    everything = [dm for classes in daggers.dagger_mor.values() for dm in classes]
    for first in everything:
        for second in everything:
            outer = {
                frozenset((first.ends[1 - i], second.ends[1 - j]))
                for i in (0, 1)
                for j in (0, 1)
                if first.ends[i] == second.ends[j]
            }
            for third in everything:
                if frozenset(third.ends) in outer:
                    yield first, second, third


def _composite_oracle(X: FiniteCategory, v: str, v2: str, v3: str) -> bool:
    options = set()
    if X.cod[v] == X.dom[v2]:
        options.add(X.table[(v2, v)])
    if X.cod[v2] == X.dom[v]:
        options.add(X.table[(v, v2)])
    return v3 in options


def check_bridge_composition(s: Subject) -> Iterable[Outcome]:
    fragment = s.fragment
    for first, second, third in _triples(s.daggers):
        v, v2, v3 = (base_morphism(fragment, dm) for dm in (first, second, third))
        found = compose_bridges(fragment, first, second, third)
        expected = _composite_oracle(s.X, v, v2, v3)
        yield (found == expected, f"criterion {found}, table {expected}", {"first": v, "second": v2, "third": v3})


def check_chain_composites(s: Subject) -> Iterable[Outcome]:
    """Each gluing of two classes closes up to what the table of ``X`` composes them to, or to nothing."""

    X, fragment = s.X, s.fragment
    com = s.recovered.com
    for (a, ia, b, ib), found in com.chains.items():
        A, B = com.classes[a], com.classes[b]
        v, v2 = base_morphism(fragment, A), base_morphism(fragment, B)
        sides = (_side(s, A, ia), _side(s, B, ib))
        expected = None
        if sides == ("cod", "dom"):
            expected = X.table[(v2, v)]
        elif sides == ("dom", "cod"):
            expected = X.table[(v, v2)]
        if expected is None:
            got, want = found is None, True
        elif found is None:
            got, want = False, True
        elif found.kind == "class":
            got, want = base_morphism(fragment, com.classes[found.index]), expected
        elif found.kind == "identity":
            got, want = True, X.is_identity(expected)
        else:
            got, want = True, is_isomorphism(X, expected) and not X.is_identity(expected)
        yield (got == want, f"gluing gave {found}, table gives {expected}", {"first": v, "second": v2, "ends": (ia, ib)})


def check_roundtrip(s: Subject) -> Iterable[Outcome]:
    result = roundtrip(s.X, seed=s.seed, budget=s.budget)
    yield (result.passed, "recovered category matches neither X nor X^op", {"orientation": result.orientation})


# Reconstruction over all functors


def check_cat_points(s: Subject) -> Iterable[Outcome]:
    fragment = s.cat_fragment
    expected = {fragment.key_of("point", e) for e in s.X.objects}
    found = set(detect_minimal_cat(fragment))
    yield (found == expected, f"found {len(found)} point(s), expected {len(expected)}", {})


def check_cat_arrows(s: Subject) -> Iterable[Outcome]:
    fragment = s.cat_fragment
    minimal = s.cat_daggers.dagger_ob
    for i, M in enumerate(minimal):
        for M2 in minimal[i:]:
            e, e2 = fragment.provenance[M][1], fragment.provenance[M2][1]
            classes = dagger_mor_cat(fragment, M, M2, minimal)
            expected = mor_brace(s.X, e, e2)
            found = {base_arrow(fragment, dm) for dm in classes}
            yield (
                len(classes) == len(expected) and found == set(expected),
                f"{len(classes)} class(es), expected {sorted(expected)}",
                {"from": e, "to": e2},
            )


def check_cat_composition(s: Subject) -> Iterable[Outcome]:
    fragment, daggers = s.cat_fragment, s.cat_daggers
    for first, second, third in _triples(daggers):
        v, v2, v3 = (base_arrow(fragment, dm) for dm in (first, second, third))
        found = compose_arrows_cat(fragment, first, second, third)
        expected = _composite_oracle(s.X, v, v2, v3)
        yield (found == expected, f"criterion {found}, table {expected}", {"first": v, "second": v2, "third": v3})


def check_strict_roundtrip(s: Subject) -> Iterable[Outcome]:
    yield (terminal_is_terminal(s.cat_fragment), "the identity functor is not terminal", {})
    result = roundtrip_strict(s.X, seed=s.seed, budget=s.budget)
    yield (result.passed, "recovered category is isomorphic to neither X nor X^op", {"orientation": result.orientation})


# Dualities and connectedness


def check_connected_one_side(s: Subject) -> Iterable[Outcome]:
    """``assemble`` never checks connectedness; comparing its result with ``X`` needs it and must succeed."""

    assembled, orientation = assemble(s.recovered)
    yield (is_connected(assembled), "recovered category is not connected", {"orientation": orientation})
    verdict = compare(s.X, assembled, budget=s.budget)
    yield (
        verdict.equivalent or verdict.op_equivalent,
        "recovered category is equivalent to neither X nor X^op",
        {"orientation": orientation},
    )


def _dual_provenance(X: FiniteCategory, provenance: Tuple[str, ...]) -> Tuple[str, ...]:
    """Where an object built over ``X`` sits in the fragment of ``X^op``: glued copies of endomorphism bridges swap."""

    if provenance[0] != "pushout":
        return provenance
    parts = []
    for part in provenance[1:]:
        v, copy = part.rsplit("@", 1)
        if X.dom[v] == X.cod[v]:
            copy = str(1 - int(copy))
        parts.append((v, copy))
    if parts[0][0] == parts[1][0]:
        parts.sort(key=lambda part: part[1])
    return ("pushout",) + tuple(f"{v}@{copy}" for v, copy in parts)


def _sizes_by_provenance(fragment: Fragment, rename: Callable[[Tuple[str, ...]], Tuple[str, ...]] = lambda p: p) -> Dict[Tuple[Tuple[str, ...], Tuple[str, ...]], int]:
    return {
        (rename(fragment.provenance[a]), rename(fragment.provenance[b])): size
        for (a, b), size in fragment.hom_sizes().items()
    }


def check_fragment_duality(s: Subject) -> Iterable[Outcome]:
    dual = build_fragment(opposite(s.X), seed=s.seed, budget=s.budget)
    mine = _sizes_by_provenance(s.fragment, lambda p: _dual_provenance(s.X, p))
    theirs = _sizes_by_provenance(dual)
    yield (len(s.fragment.order) == len(dual.order), f"{len(s.fragment.order)} vs {len(dual.order)} object(s)", {})
    differing = sorted(pair for pair in mine if mine[pair] != theirs.get(pair))
    yield (not differing, f"hom-set sizes differ at {differing[:3]}", {})


PER_CATEGORY: Dict[str, Callable[[Subject], Iterable[Outcome]]] = {
    "validators": check_validators,
    "covers_surjective": check_covers_surjective,
    "cover_hom_counts": check_cover_hom_counts,
    "cover_endomorphisms": check_cover_endomorphisms,
    "cover_monos": check_cover_monos,
    "groupoid_adjunction": check_groupoid_adjunction,
    "pushforward_minimality": check_pushforward_minimality,
    "minimal_objects": check_minimal_objects,
    "automorphism_groups": check_automorphism_groups,
    "bridge_classes": check_bridge_classes,
    "aut_composition": check_aut_composition,
    "bridge_composition": check_bridge_composition,
    "chain_composites": check_chain_composites,
    "roundtrip": check_roundtrip,
    "cat_points": check_cat_points,
    "cat_arrows": check_cat_arrows,
    "cat_composition": check_cat_composition,
    "strict_roundtrip": check_strict_roundtrip,
    "connected_one_side": check_connected_one_side,
    "fragment_duality": check_fragment_duality,
}


# Fixed instances


def check_topology_species() -> Iterable[Outcome]:
    Z = finite_sets({"T": ("p", "q")})
    sigma = validate_species(topology_species(Z, {"T": ("p", "q")}, {}))
    F: ConstructiveFunctor = realize(sigma)
    yield (len(F.total.objects) == 4, f"{len(F.total.objects)} topolog(ies) on two points", {"points": 2})


def check_discrimination() -> Iterable[Outcome]:
    pairs = (("Cospan", "Span", (False, True)), ("Z2", "One", (False, False)), ("Iso2", "One", (True, True)))
    for left, right, (equivalent, op_equivalent) in pairs:
        verdict = compare(fixture(left), fixture(right))
        got = (verdict.equivalent, verdict.op_equivalent)
        yield (got == (equivalent, op_equivalent), f"compare gave {got}", {"left": left, "right": right})
    strict = compare_strict(fixture("Iso2"), fixture("One"))
    got = (strict.equivalent, strict.op_equivalent)
    yield (got == (False, False), f"strict compare gave {got}", {"left": "Iso2", "right": "One"})


FIXED: Dict[str, Callable[[], Iterable[Outcome]]] = {
    "topology_species": check_topology_species,
    "discrimination": check_discrimination,
}

CHECKS: Tuple[str, ...] = tuple(PER_CATEGORY) + tuple(FIXED)


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    elapsed_ms: float = 0.0

    def record(self, outcome: Outcome, category: Optional[FiniteCategory] = None) -> None:
        ok, detail, inputs = outcome
        if ok:
            self.passed += 1
            return
        self.failed += 1
        entry: Dict[str, Any] = {"detail": detail, "inputs": inputs}
        if category is not None:
            entry["category"] = category.name
            entry["document"] = serialize(from_category(category))
        self.failures.append(entry)

    def as_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "failed": self.failed, "failures": self.failures}


def run_check(name: str, categories: Sequence[FiniteCategory], seed: Optional[int] = None, budget: Optional[int] = None) -> CheckResult:
    if name not in CHECKS:
        raise KeyError(f"unknown check {name}")
    return run_battery(categories, [name], seed=seed, budget=budget)[name]


def _collect(result: CheckResult, produce: Callable[[], Iterable[Outcome]], category: Optional[FiniteCategory] = None) -> None:
    try:
        for outcome in produce():
            result.record(outcome, category)
    except SpecatError as exc:
        result.record(_bad(f"{type(exc).__name__}: {exc}"), category)


def run_battery(
    categories: Sequence[FiniteCategory],
    names: Optional[Sequence[str]] = None,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
) -> Dict[str, CheckResult]:
    """Run the named checks (all of them by default) in battery order."""

    selected = [n for n in CHECKS if names is None or n in names]
    results = {name: CheckResult(name) for name in selected}
    subjects = [Subject(X, seed=seed, budget=budget) for X in categories]
    for name in selected:
        started = time.perf_counter()
        if name in FIXED:
            _collect(results[name], FIXED[name])
        else:
            for subject in subjects:
                _collect(results[name], lambda: PER_CATEGORY[name](subject), subject.X)
        results[name].elapsed_ms = (time.perf_counter() - started) * 1000
        logging.info("Check %s: %d passed, %d failed", name, results[name].passed, results[name].failed)
    return results


def all_passed(results: Dict[str, CheckResult]) -> bool:
    return all(r.failed == 0 for r in results.values())
