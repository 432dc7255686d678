"""Thin categories over a base category, and links between two marked ends.

A link is a thin category over ``X`` together with two marked sub-objects
(its ends).  Bridges between covers and arrow objects between points are
links; gluing two of them along a common end builds the pushouts the
fragments store.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

from .catcore import FiniteCategory, FunctorData, MorId, ObjId, build_category, identity_name
from .errors import LawViolation


@dataclass(frozen=True)
class ThinOver:
    """A category with at most one morphism per ordered pair, labelled in ``base``."""

    base: FiniteCategory
    labels: Mapping[ObjId, ObjId]
    arrows: Mapping[Tuple[ObjId, ObjId], MorId]

    @property
    def objects(self) -> Tuple[ObjId, ...]:
        return tuple(self.labels)

    def to_functor(self, name: str) -> FunctorData:
        morphisms: Dict[MorId, Tuple[ObjId, ObjId]] = {}
        names: Dict[Tuple[ObjId, ObjId], MorId] = {}
        for (p, q) in self.arrows:
            names[(p, q)] = identity_name(p) if p == q else f"{p}->{q}"
            morphisms[names[(p, q)]] = (p, q)
        table: Dict[Tuple[MorId, MorId], MorId] = {}
        for (p, q) in self.arrows:
            for (q2, r) in self.arrows:
                if q != q2:
                    continue
                if (p, r) not in self.arrows:
                    raise LawViolation(f"thin category {name} is not closed at {p} -> {q} -> {r}")
                table[(names[(q, r)], names[(p, q)])] = names[(p, r)]
        total = build_category(name, self.objects, morphisms, table, {o: names[(o, o)] for o in self.labels})
        return FunctorData(
            source=total,
            target=self.base,
            object_map=dict(self.labels),
            morphism_map={names[key]: label for key, label in self.arrows.items()},
        )


def point(base: FiniteCategory, e: ObjId) -> ThinOver:
    return ThinOver(base, {e: e}, {(e, e): base.identity[e]})


@dataclass(frozen=True)
class Link:
    """``body`` with two marked ends; ``ends[i]`` embeds ``end_bodies[i]`` into ``body``."""

    body: ThinOver
    end_bodies: Tuple[ThinOver, ThinOver]
    ends: Tuple[Mapping[ObjId, ObjId], Mapping[ObjId, ObjId]]
    tag: str = ""

    def cross_arrows(self) -> Dict[Tuple[ObjId, ObjId], MorId]:
        first = set(self.ends[0].values())
        second = set(self.ends[1].values())
        return {
            (p, q): m
            for (p, q), m in self.body.arrows.items()
            if (p in first and q in second) or (p in second and q in first)
        }

    def direction(self) -> Optional[int]:
        """+1 when cross arrows run from end 0 to end 1, -1 for the reverse, None if absent."""

        first = set(self.ends[0].values())
        signs = {1 if p in first else -1 for (p, _q) in self.cross_arrows()}
        if len(signs) != 1:
            return None
        return signs.pop()


def join_link(first: ThinOver, second: ThinOver, cross: Mapping[Tuple[ObjId, ObjId], MorId], forward: bool, tag: str) -> Link:
    """Copies of ``first`` and ``second`` with ``cross`` arrows (keys ordered first, second)."""

    labels: Dict[ObjId, ObjId] = {}
    arrows: Dict[Tuple[ObjId, ObjId], MorId] = {}
    for copy, part in (("0", first), ("1", second)):
        for o, x in part.labels.items():
            labels[f"{copy}:{o}"] = x
        for (p, q), m in part.arrows.items():
            arrows[(f"{copy}:{p}", f"{copy}:{q}")] = m
    for (p, q), m in cross.items():
        if forward:
            arrows[(f"0:{p}", f"1:{q}")] = m
        else:
            arrows[(f"1:{q}", f"0:{p}")] = m
    return Link(
        ThinOver(first.base, labels, arrows),
        (first, second),
        ({o: f"0:{o}" for o in first.labels}, {o: f"1:{o}" for o in second.labels}),
        tag,
    )


def _close(base: FiniteCategory, arrows: Dict[Tuple[ObjId, ObjId], MorId]) -> Dict[Tuple[ObjId, ObjId], MorId]:
    changed = True
    while changed:
        changed = False
        for (p, q), f in list(arrows.items()):
            for (q2, r), g in list(arrows.items()):
                if q != q2:
                    continue
                label = base.table[(g, f)]
                known = arrows.get((p, r))
                if known is None:
                    arrows[(p, r)] = label
                    changed = True
                elif known != label:
                    raise LawViolation(f"gluing is not thin at {p} -> {q} -> {r}")
    return arrows


def _same_end(a: ThinOver, b: ThinOver) -> bool:
    return dict(a.labels) == dict(b.labels) and dict(a.arrows) == dict(b.arrows)


def gluing_maps(A: Link, a_end: int, B: Link, b_end: int) -> Tuple[Dict[ObjId, ObjId], Dict[ObjId, ObjId]]:
    """Where the objects of ``A`` and ``B`` land when glued along the given ends."""

    if not _same_end(A.end_bodies[a_end], B.end_bodies[b_end]):
        raise LawViolation("links can only be glued along the same end")
    glue = {B.ends[b_end][o]: A.ends[a_end][o] for o in B.end_bodies[b_end].labels}
    map_a = {o: f"a:{o}" for o in A.body.labels}
    map_b = {o: (f"a:{glue[o]}" if o in glue else f"b:{o}") for o in B.body.labels}
    return map_a, map_b


def amalgamate(A: Link, a_end: int, B: Link, b_end: int) -> Link:
    """Glue ``A`` and ``B`` along ``A.ends[a_end]`` = ``B.ends[b_end]``.

    The result is the pushout of the two end inclusions, presented as a link
    whose ends are the remaining end of ``A`` and the remaining end of ``B``.
    """

    map_a, map_b = gluing_maps(A, a_end, B, b_end)
    labels: Dict[ObjId, ObjId] = {map_a[o]: x for o, x in A.body.labels.items()}
    arrows: Dict[Tuple[ObjId, ObjId], MorId] = {(map_a[p], map_a[q]): m for (p, q), m in A.body.arrows.items()}
    for o, x in B.body.labels.items():
        labels.setdefault(map_b[o], x)
    for (p, q), m in B.body.arrows.items():
        key = (map_b[p], map_b[q])
        if key in arrows and arrows[key] != m:
            raise LawViolation(f"glued end disagrees at {p} -> {q}")
        arrows[key] = m
    arrows = _close(A.body.base, arrows)

    outer_a = 1 - a_end
    outer_b = 1 - b_end
    return Link(
        ThinOver(A.body.base, labels, arrows),
        (A.end_bodies[outer_a], B.end_bodies[outer_b]),
        (
            {o: map_a[y] for o, y in A.ends[outer_a].items()},
            {o: map_b[y] for o, y in B.ends[outer_b].items()},
        ),
        tag=f"{A.tag}*{B.tag}",
    )
