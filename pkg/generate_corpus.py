"""Write the fixture and generated corpus categories as `.cat` documents."""

from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import Iterable, Optional

from specat.corpus import generate_corpus
from specat.docfile import from_category, serialize
from specat.errors import SpecatError

PROJECT_ROOT = Path(__file__).resolve().parent
DEFAULT_OUT = PROJECT_ROOT / "data" / "corpus"


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Generate small connected categories as documents.")
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT, help=f"Output directory (default: {DEFAULT_OUT}).")
    parser.add_argument("--max-objects", type=int, default=2)
    parser.add_argument("--max-morphisms", type=int, default=3)
    parser.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--samples", type=int, default=20, help="Draws in random mode.")
    parser.add_argument("--no-fixtures", action="store_true", help="Skip the named fixtures.")
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging.")
    return parser


def main(argv: Optional[Iterable[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    out: Path = args.out.expanduser().resolve()
    out.mkdir(parents=True, exist_ok=True)

    written = 0
    try:
        for C in generate_corpus(
            args.max_objects,
            args.max_morphisms,
            seed=args.seed,
            mode=args.mode,
            samples=args.samples,
            include_fixtures=not args.no_fixtures,
        ):
            path = out / f"{C.name}.cat"
            path.write_text(serialize(from_category(C)), encoding="utf-8")
            logging.debug("Wrote %s", path)
            written += 1
    except SpecatError as exc:
        logging.error("Corpus generation failed: %s", exc)
        return 2

    print(f"Corpus complete. Wrote {written} document(s) to {out}.")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
