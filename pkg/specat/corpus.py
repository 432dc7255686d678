"""Named fixture categories and the small-category corpus generator."""

from __future__ import annotations

import itertools
import logging
import random
from collections import Counter
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .catcore import FiniteCategory, MorId, OrderedSet, build_category, check_laws, identity_name, is_connected
from .config import get_settings
from .docfile import load_category
from .errors import BoundsTooLarge, SearchBudgetExceeded
from .species import StructureSpecies

EXHAUSTIVE_MAX_OBJECTS = 3
EXHAUSTIVE_MAX_MORPHISMS = 8
EXHAUSTIVE_MAX_ENDOMORPHISMS = 4

FIXTURES: Dict[str, str] = {
    "One": """\
category One
object o
""",
    "Z2": """\
category Z2
object s0
morphism s : s0 -> s0
compose s s = id_s0
""",
    "Arrow": """\
category Arrow
object A
object B
morphism f : A -> B
""",
    "Par2": """\
category Par2
object A
object B
morphism f : A -> B
morphism g : A -> B
""",
    "Iso2": """\
category Iso2
object a
object b
morphism i : a -> b
morphism j : b -> a
compose j i = id_a
compose i j = id_b
""",
    "Cospan": """\
category Cospan
object A
object B
object C
morphism f : A -> B
morphism g : C -> B
""",
    "Span": """\
category Span
object A
object B
object C
morphism f : B -> A
morphism g : B -> C
""",
    "Chain3": """\
category Chain3
object A
object B
object C
morphism f : A -> B
morphism g : B -> C
morphism h : A -> C
compose g f = h
""",
    "Chain3X": """\
category Chain3X
object A
object B
object C
morphism f : A -> B
morphism g : B -> C
morphism h : A -> C
morphism k : A -> C
compose g f = h
""",
}


def fixture(name: str) -> FiniteCategory:
    return load_category(FIXTURES[name])


def fixtures() -> Dict[str, FiniteCategory]:
    return {name: fixture(name) for name in FIXTURES}


def constant_species(C: FiniteCategory) -> StructureSpecies:
    """Every object gets the chain ``lo < hi`` with both elements selected; every ``E(u)`` is the identity."""

    chain = OrderedSet(("lo", "hi"), frozenset({("lo", "lo"), ("hi", "hi"), ("lo", "hi")}))
    return StructureSpecies(
        base=C,
        orders={a: chain for a in C.objects},
        emaps={u: {"lo": "lo", "hi": "hi"} for u in C.morphisms},
        structures={a: ("lo", "hi") for a in C.objects},
        name=f"Chain[{C.name}]",
    )


def _canonical(counts: Dict[Tuple[int, int], int], n: int) -> Tuple[int, ...]:
    return min(
        tuple(counts[(p[i], p[j])] for i in range(n) for j in range(n))
        for p in itertools.permutations(range(n))
    )


def _distributions(slots: int, total: int) -> Iterator[Tuple[int, ...]]:
    if slots == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _distributions(slots - 1, total - first):
            yield (first,) + rest


def hom_profiles(n: int, max_morphisms: int) -> Iterator[Dict[Tuple[int, int], int]]:
    """Non-identity hom-set sizes on ``n`` objects, connected, one per relabelling class."""

    pairs = [(i, j) for i in range(n) for j in range(n)]
    seen = set()
    for sizes in _distributions(len(pairs), max_morphisms):
        counts = dict(zip(pairs, sizes))
        key = _canonical(counts, n)
        if key in seen:
            continue
        seen.add(key)
        edges = [(i, j) for (i, j), c in counts.items() if c and i != j]
        reached = {0}
        for _ in range(n):
            reached |= {j for i, j in edges if i in reached} | {i for i, j in edges if j in reached}
        if len(reached) == n:
            yield counts


def _refined_colors(C: FiniteCategory) -> Dict[MorId, int]:
    """Colour refinement of morphisms by how they compose; isomorphisms preserve the colours."""

    identities = set(C.identity.values())
    color = {m: 2 * (m in identities) + (C.dom[m] == C.cod[m]) for m in C.morphisms}
    while True:
        signature = {}
        for m in C.morphisms:
            after = sorted((color[g], color[C.table[(g, m)]]) for g in C.morphisms if C.dom[g] == C.cod[m])
            before = sorted((color[f], color[C.table[(m, f)]]) for f in C.morphisms if C.cod[f] == C.dom[m])
            signature[m] = (
                color[m],
                color[C.identity[C.dom[m]]],
                color[C.identity[C.cod[m]]],
                tuple(after),
                tuple(before),
            )
        ranks = {s: r for r, s in enumerate(sorted(set(signature.values())))}
        refined = {m: ranks[signature[m]] for m in C.morphisms}
        if len(ranks) == len(set(color.values())):
            return refined
        color = refined


def _swaps_to_automorphism(C: FiniteCategory, m: MorId, m2: MorId) -> bool:
    swap = {m: m2, m2: m}
    return all(
        swap.get(C.table[(g, f)], C.table[(g, f)]) == C.table[(swap.get(g, g), swap.get(f, f))]
        for (g, f) in C.table
    )


def _twin_blocks(C: FiniteCategory, members: Sequence[MorId]) -> List[List[MorId]]:
    """Split a colour class into blocks whose members any transposition exchanges."""

    identities = set(C.identity.values())
    blocks: List[List[MorId]] = []
    for m in sorted(members):
        for block in blocks:
            head = block[0]
            if (
                m not in identities
                and head not in identities
                and (C.dom[m], C.cod[m]) == (C.dom[head], C.cod[head])
                and _swaps_to_automorphism(C, m, head)
            ):
                block.append(m)
                break
        else:
            blocks.append([m])
    return blocks


def _distinct_orders(blocks: Sequence[Sequence[MorId]]) -> Iterator[Tuple[MorId, ...]]:
    counts = [len(block) for block in blocks]

    def labels() -> Iterator[Tuple[int, ...]]:
        if not any(counts):
            yield ()
            return
        for b, left in enumerate(counts):
            if left:
                counts[b] -= 1
                for rest in labels():
                    yield (b,) + rest
                counts[b] += 1

    for sequence in labels():
        cursor = [0] * len(blocks)
        order = []
        for b in sequence:
            order.append(blocks[b][cursor[b]])
            cursor[b] += 1
        yield tuple(order)


def _encoding(C: FiniteCategory, order: Sequence[MorId]) -> Tuple:
    index = {m: i for i, m in enumerate(order)}
    ends = tuple((index[C.identity[C.dom[m]]], index[C.identity[C.cod[m]]]) for m in order)
    table = tuple(index[C.table[(g, f)]] if C.dom[g] == C.cod[f] else -1 for g in order for f in order)
    return (len(C.objects), ends, table)


def canonical_form(C: FiniteCategory) -> Tuple:
    """A key equal for two categories exactly when they are isomorphic.

    Morphisms are ordered by refined colour; ties are broken by the least table encoding,
    and morphisms a transposition exchanges are never reordered among themselves.
    """

    color = _refined_colors(C)
    classes: Dict[int, List[MorId]] = {}
    for m, c in color.items():
        classes.setdefault(c, []).append(m)
    options = [list(_distinct_orders(_twin_blocks(C, classes[c]))) for c in sorted(classes)]
    return min(
        _encoding(C, [m for part in choice for m in part])
        for choice in itertools.product(*options)
    )


class _TableSearch:
    """Backtracking over composition tables.

    Fixing an entry propagates every composite associativity then forces, and among the
    morphisms of a hom-set that no fixed entry mentions only the first is tried.
    """

    def __init__(
        self,
        objects: Sequence[str],
        ends: Dict[str, Tuple[str, str]],
        identity: Dict[str, str],
        budget: int,
        tally: Optional[Counter] = None,
    ) -> None:
        self.objects = objects
        self.ends = ends
        self.identity = identity
        self.budget = budget
        self.tally = Counter() if tally is None else tally
        self.identities = set(identity.values())
        self.table: Dict[Tuple[str, str], str] = {}
        for m, (a, b) in ends.items():
            self.table[(identity[b], m)] = m
            self.table[(m, identity[a])] = m
        self.free = [
            (g, f)
            for f in ends
            for g in ends
            if f not in self.identities and g not in self.identities and ends[f][1] == ends[g][0]
        ]
        self.hom = {
            (a, b): [m for m, e in ends.items() if e == (a, b)] for a in objects for b in objects
        }
        self.after = {m: [g for g in ends if ends[g][0] == ends[m][1]] for m in ends}
        self.before = {m: [f for f in ends if ends[f][1] == ends[m][0]] for m in ends}
        self.used: Counter = Counter()

    @property
    def nodes(self) -> int:
        return self.tally["nodes"]

    def _fix(self, g: str, f: str, h: str, log: List[Tuple[str, str]]) -> bool:
        """Set ``g ∘ f = h`` with its consequences; ``False`` on a contradiction."""

        table = self.table
        pending = [(g, f, h)]
        while pending:
            g, f, h = pending.pop()
            known = table.get((g, f))
            if known is not None:
                if known != h:
                    return False
                continue
            table[(g, f)] = h
            log.append((g, f))
            self.used.update((g, f, h))
            # k ∘ (g ∘ f) = (k ∘ g) ∘ f
            for k in self.after[g]:
                kg = table.get((k, g))
                if kg is None:
                    continue
                outer, inner = table.get((k, h)), table.get((kg, f))
                if outer is not None:
                    pending.append((kg, f, outer))
                elif inner is not None:
                    pending.append((k, h, inner))
            # (g ∘ f) ∘ k = g ∘ (f ∘ k)
            for k in self.before[f]:
                fk = table.get((f, k))
                if fk is None:
                    continue
                outer, inner = table.get((h, k)), table.get((g, fk))
                if outer is not None:
                    pending.append((g, fk, outer))
                elif inner is not None:
                    pending.append((h, k, inner))
            for (x, y), value in list(table.items()):
                if value == g and (y, f) in table:
                    pending.append((x, table[(y, f)], h))
                if value == f and (g, x) in table:
                    pending.append((table[(g, x)], y, h))
        return True

    def _undo(self, log: List[Tuple[str, str]]) -> None:
        for g, f in reversed(log):
            self.used.subtract((g, f, self.table.pop((g, f))))

    def _choices(self, g: str, f: str) -> List[str]:
        choices, unused_seen = [], False
        for h in self.hom[(self.ends[f][0], self.ends[g][1])]:
            if h in self.identities or h in (g, f) or self.used[h] > 0:
                choices.append(h)
            elif not unused_seen:
                unused_seen = True
                choices.append(h)
        return choices

    def tables(self, rng: Optional[random.Random] = None) -> Iterator[Dict[Tuple[str, str], str]]:
        def extend(index: int) -> Iterator[Dict[Tuple[str, str], str]]:
            while index < len(self.free) and self.free[index] in self.table:
                index += 1
            if index == len(self.free):
                yield dict(self.table)
                return
            g, f = self.free[index]
            choices = self._choices(g, f)
            if rng is not None:
                rng.shuffle(choices)
            for h in choices:
                self.tally["nodes"] += 1
                if self.tally["nodes"] > self.budget:
                    raise SearchBudgetExceeded(self.budget)
                log: List[Tuple[str, str]] = []
                if self._fix(g, f, h, log):
                    yield from extend(index + 1)
                self._undo(log)

        yield from extend(0)


def _categories_for(
    counts: Dict[Tuple[int, int], int],
    n: int,
    budget: int,
    rng: Optional[random.Random] = None,
    tally: Optional[Counter] = None,
) -> Iterator[FiniteCategory]:
    objects = [chr(ord("A") + i) for i in range(n)]
    ends: Dict[str, Tuple[str, str]] = {identity_name(o): (o, o) for o in objects}
    identity = {o: identity_name(o) for o in objects}
    serial = itertools.count()
    for (i, j), c in sorted(counts.items()):
        for _ in range(c):
            ends[f"m{next(serial)}"] = (objects[i], objects[j])
    search = _TableSearch(objects, ends, identity, budget, tally)
    for table in search.tables(rng):
        C = build_category("Gen", objects, ends, table, identity)
        if not check_laws(C):
            yield C


def _check_bounds(max_objects: int, max_morphisms: int, mode: str) -> None:
    if mode not in ("exhaustive", "random"):
        raise BoundsTooLarge(f"unknown corpus mode {mode}")
    if mode != "exhaustive":
        return
    if max_objects > EXHAUSTIVE_MAX_OBJECTS or max_morphisms > EXHAUSTIVE_MAX_MORPHISMS:
        raise BoundsTooLarge(
            f"exhaustive corpus is capped at {EXHAUSTIVE_MAX_OBJECTS} objects and "
            f"{EXHAUSTIVE_MAX_MORPHISMS} non-identity morphisms"
        )
    if max_morphisms > EXHAUSTIVE_MAX_ENDOMORPHISMS:
        raise BoundsTooLarge(
            f"{max_morphisms} non-identity morphisms would enumerate every monoid of order {max_morphisms + 1} "
            f"(thousands up to isomorphism); exhaustive mode reaches {EXHAUSTIVE_MAX_ENDOMORPHISMS}, "
            "use --mode random for larger bounds"
        )


def generate_corpus(
    max_objects: int = 2,
    max_morphisms: int = 3,
    seed: Optional[int] = None,
    mode: str = "exhaustive",
    samples: int = 20,
    include_fixtures: bool = True,
    budget: Optional[int] = None,
) -> Iterator[FiniteCategory]:
    """Yield the fixtures, then connected valid categories within the bounds, one per isomorphism class.

    The search budget is shared by the whole run.
    """

    _check_bounds(max_objects, max_morphisms, mode)
    settings = get_settings()
    budget = settings.budget if budget is None else budget
    seen: Set[Tuple] = set()
    tally: Counter = Counter()

    def fresh(C: FiniteCategory) -> bool:
        if not is_connected(C):
            return False
        key = canonical_form(C)
        if key in seen:
            return False
        seen.add(key)
        return True

    if include_fixtures:
        for C in fixtures().values():
            seen.add(canonical_form(C))
            yield C

    serial = itertools.count()
    if mode == "exhaustive":
        for n in range(1, max_objects + 1):
            for counts in hom_profiles(n, max_morphisms):
                try:
                    for C in _categories_for(counts, n, budget, tally=tally):
                        if fresh(C):
                            yield _renamed(C, f"Gen{next(serial)}")
                except SearchBudgetExceeded as exc:
                    profile = {f"{i}->{j}": c for (i, j), c in sorted(counts.items()) if c}
                    raise BoundsTooLarge(
                        f"exhaustive corpus ran out of its {budget} search nodes on {n} object(s) with hom sizes "
                        f"{profile}; lower --max-morphisms or raise --budget"
                    ) from exc
        logging.info("Exhaustive corpus: %d categor(ies), %d search node(s)", len(seen), tally["nodes"])
        return

    rng = random.Random(settings.seed if seed is None else seed)
    for _ in range(samples):
        n = rng.randint(1, max_objects)
        profiles = list(hom_profiles(n, max_morphisms))
        counts = rng.choice(profiles)
        C = next(_categories_for(counts, n, budget, rng, tally), None)
        if C is not None and fresh(C):
            yield _renamed(C, f"Rand{next(serial)}")
    logging.info("Random corpus: %d categor(ies)", len(seen))


def _renamed(C: FiniteCategory, name: str) -> FiniteCategory:
    return build_category(name, C.objects, {m: (C.dom[m], C.cod[m]) for m in C.morphisms}, C.table, C.identity)
