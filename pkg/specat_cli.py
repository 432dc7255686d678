"""Command-line surface for the finite category toolkit."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Mapping, Optional, TextIO

from specat.catcore import FiniteCategory, connected_components, maximal_groupoids, opposite, skeleton, validate_category
from specat.catover import compare_strict, roundtrip_strict
from specat.config import get_settings
from specat.constructive import point_cover
from specat.corpus import generate_corpus
from specat.docfile import build_species, from_category, read_document, serialize
from specat.errors import LawViolation, NonTotalComposition, SpecatError
from specat.reconstruct import compare, roundtrip
from specat.report import build_report, dump_json, render_text
from specat.species import finite_sets, realize, topology_species, validate_species
from specat.verify import CHECKS, all_passed, run_battery


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s")


@dataclass
class CommandResult:
    verdict: Any
    status: int = 0
    witnesses: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)
    document: Optional[str] = None  # text output for commands that produce a category


def _load(path: Path) -> FiniteCategory:
    return validate_category(read_document(path).description())


def _dump(C: FiniteCategory) -> str:
    return serialize(from_category(C))


def cmd_validate(args: argparse.Namespace) -> CommandResult:
    doc = read_document(args.file)
    try:
        C = validate_category(doc.description())
    except (LawViolation, NonTotalComposition) as exc:
        violations = getattr(exc, "violations", []) or [str(exc)]
        return CommandResult({"valid": False}, status=1, witnesses={"violations": violations})
    verdict: Dict[str, Any] = {"valid": True, "objects": len(C.objects), "morphisms": len(C.morphisms)}
    if doc.species is not None:
        sigma = validate_species(build_species(doc, C))
        verdict["species"] = sigma.name
        verdict["structures"] = len(realize(sigma).total.objects)
    return CommandResult(verdict)


def cmd_op(args: argparse.Namespace) -> CommandResult:
    C = opposite(_load(args.file))
    return CommandResult({"category": C}, document=_dump(C))


def cmd_skeleton(args: argparse.Namespace) -> CommandResult:
    sk, inclusion = skeleton(_load(args.file))
    return CommandResult({"category": sk}, witnesses={"inclusion": inclusion}, document=_dump(sk))


def cmd_components(args: argparse.Namespace) -> CommandResult:
    blocks = connected_components(_load(args.file))
    return CommandResult({"components": [sorted(b) for b in blocks], "connected": len(blocks) == 1})


def cmd_groupoids(args: argparse.Namespace) -> CommandResult:
    groupoids = maximal_groupoids(_load(args.file))
    return CommandResult({"groupoids": groupoids})


def cmd_cover(args: argparse.Namespace) -> CommandResult:
    F = point_cover(_load(args.file), args.object)
    Y = F.total
    verdict = {
        "object": args.object,
        "objects": {y: list(F.payload[y]) for y in Y.objects},
        "morphisms": {m: [Y.dom[m], Y.cod[m], F.functor.morphism_map[m]] for m in Y.morphisms},
    }
    return CommandResult(verdict)


def cmd_species_top(args: argparse.Namespace) -> CommandResult:
    if args.file is not None:
        doc = read_document(args.file)
        Z = validate_category(doc.description())
        section = doc.species
        points = {a: tuple(section.orders.get(a, ())) if section else () for a in Z.objects}
        maps = dict(section.emaps) if section else {}
    else:
        points = {"T": tuple(p for p in args.points.split(",") if p)}
        Z, maps = finite_sets(points), {}
    sigma = validate_species(topology_species(Z, points, maps))
    F = realize(sigma)
    verdict = {
        "species": sigma.name,
        "topologies": {a: list(sigma.structures[a]) for a in Z.objects},
        "fiber_objects": len(F.total.objects),
    }
    return CommandResult(verdict)


def cmd_reconstruct(args: argparse.Namespace) -> CommandResult:
    X = _load(args.file)
    run = roundtrip_strict if args.strict else roundtrip
    result = run(X, seed=args.seed, budget=args.budget)
    verdict = {
        "passed": result.passed,
        "matches": result.matches,
        "orientation": result.orientation,
        "fragment_objects": result.fragment_objects,
        "minimal_objects": result.minimal_objects,
    }
    witnesses = {"assembled": result.assembled}
    if result.witness is not None:
        witnesses["comparison"] = result.witness
    return CommandResult(verdict, status=0 if result.passed else 1, witnesses=witnesses, timings=dict(result.timings_ms))


def cmd_compare(args: argparse.Namespace) -> CommandResult:
    X, X2 = _load(args.first), _load(args.second)
    verdict = (compare_strict if args.strict else compare)(X, X2, budget=args.budget)
    return CommandResult(
        {"equivalent": verdict.equivalent, "op_equivalent": verdict.op_equivalent},
        status=0 if verdict.equivalent else 1,
        witnesses=dict(verdict.witnesses),
    )


def cmd_verify(args: argparse.Namespace) -> CommandResult:
    corpus = list(
        generate_corpus(args.max_objects, args.max_morphisms, seed=args.seed, mode=args.mode, samples=args.samples, budget=args.budget)
    )
    results = run_battery(corpus, args.check or None, seed=args.seed, budget=args.budget)
    verdict = {
        "passed": all_passed(results),
        "corpus": [C.name for C in corpus],
        "checks": {name: r.as_dict() for name, r in results.items()},
    }
    timings = {name: r.elapsed_ms for name, r in results.items()} if args.timings else {}
    return CommandResult(verdict, status=0 if verdict["passed"] else 1, timings=timings)


COMMANDS: Mapping[str, Callable[[argparse.Namespace], CommandResult]] = {
    "validate": cmd_validate,
    "op": cmd_op,
    "skeleton": cmd_skeleton,
    "components": cmd_components,
    "groupoids": cmd_groupoids,
    "cover": cmd_cover,
    "species-top": cmd_species_top,
    "reconstruct": cmd_reconstruct,
    "compare": cmd_compare,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="Output format.")
    common.add_argument("--verbose", action="store_true", help="Enable debug logging.")
    common.add_argument("--budget", type=int, default=None, help="Search-node budget (default: SPECAT_BUDGET).")
    common.add_argument("--seed", type=int, default=None, help="Seed for fragment shuffling and corpus sampling.")

    parser = argparse.ArgumentParser(description="Compute with finite categories and reconstruct them from their covers.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("validate", "Check a category document and its species section."),
        ("op", "Print the opposite category."),
        ("skeleton", "Print a skeleton and its inclusion."),
        ("components", "List connected components."),
        ("groupoids", "List maximal connected groupoids."),
    ):
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        cmd.add_argument("file", type=Path)

    cover = sub.add_parser("cover", parents=[common], help="Dump the universal cover at an object.")
    cover.add_argument("file", type=Path)
    cover.add_argument("--object", required=True, help="Base object of the cover.")

    top = sub.add_parser("species-top", parents=[common], help="Realize the topology species.")
    top.add_argument("file", type=Path, nargs="?", help="Category of finite sets; points come from `order` lines.")
    top.add_argument("--points", default="p,q", help="Comma-separated points when no file is given.")

    rec = sub.add_parser("reconstruct", parents=[common], help="Rebuild a category from its covers.")
    rec.add_argument("file", type=Path)
    rec.add_argument("--strict", action="store_true", help="Use all functors and recover up to isomorphism.")

    cmp_ = sub.add_parser("compare", parents=[common], help="Compare two categories up to equivalence.")
    cmp_.add_argument("first", type=Path)
    cmp_.add_argument("second", type=Path)
    cmp_.add_argument("--strict", action="store_true", help="Compare up to isomorphism.")

    ver = sub.add_parser("verify", parents=[common], help="Run the check battery on a corpus.")
    ver.add_argument("--max-objects", type=int, default=2)
    ver.add_argument("--max-morphisms", type=int, default=3)
    ver.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    ver.add_argument("--samples", type=int, default=20, help="Draws in random mode.")
    ver.add_argument("--check", action="append", choices=CHECKS, help="Run only this check (repeatable).")
    ver.add_argument("--timings", action="store_true", help="Include per-check timings in the report.")
    return parser


def _inputs(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"format", "verbose", "command"}
    return {k: str(v) if isinstance(v, Path) else v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(text: str, stream: Optional[TextIO] = None) -> None:
    (stream or sys.stdout).write(text)


def main(argv: Optional[Iterable[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    settings = get_settings()
    args.budget = settings.budget if args.budget is None else args.budget
    args.seed = settings.seed if args.seed is None else args.seed

    try:
        result = COMMANDS[args.command](args)
    except (SpecatError, OSError) as exc:
        logging.debug("%s failed", args.command, exc_info=True)
        if args.format == "json":
            _emit(dump_json(build_report(args.command, _inputs(args), None, seed=args.seed, error=str(exc))))
        else:
            _emit(f"error: {exc}\n", sys.stderr)
        return 2

    if args.format == "text" and result.document is not None:
        _emit(result.document)
        return result.status
    report = build_report(args.command, _inputs(args), result.verdict, result.witnesses, result.timings, args.seed)
    _emit(dump_json(report) if args.format == "json" else render_text(report))
    return result.status


if __name__ == "__main__":
    raise SystemExit(main())
