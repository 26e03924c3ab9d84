"""Command-line entry point: ``melorig <subcommand> --config FILE [--out DIR] [--strict]``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError, MelorigError
from .pipeline import EXIT_CONFIG, EXIT_FAILURES, Pipeline, load_config

log = logging.getLogger("melorig")

SUBCOMMANDS = {
    "scan": "check the datasheet against the corpus folder",
    "matrix": "write transition count and probability matrices plus the heat map",
    "score": "score every piece and write the score table, ranking, and datasheet",
    "popularity": "look up popularity for every indexed title",
    "stats": "regression, no-constant OLS, quadratic check, composer t-tests",
    "report": "figures and report tables",
    "run": "the whole pipeline",
}


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", type=Path, default=default, help="flat key = value config file")
    p.add_argument("--out", type=Path, default=default, help="output directory (overrides out_dir)")
    p.add_argument("--strict", action="store_true", default=argparse.SUPPRESS if suppress else False,
                   help="treat per-piece failures as fatal (exit 1)")
    p.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS if suppress else 0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="melorig", description=__doc__)
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in SUBCOMMANDS.items():
        _add_globals(sub.add_parser(name, help=help_text), suppress=True)
    demo = sub.add_parser("demo", help="copy the bundled 12-piece synthetic corpus into a folder")
    demo.add_argument("dest", type=Path)
    return parser


def _execute(pipe: Pipeline, command: str) -> list[Path]:
    if command == "scan":
        idx = pipe.index
        print(f"{len(idx)} of {len(idx) + len(idx.missing)} datasheet rows have a MIDI file")
        return []
    if command == "matrix":
        return pipe.write_matrix()
    if command == "score":
        return pipe.write_scores() + pipe.write_datasheet()
    if command == "popularity":
        return pipe.write_popularity()
    if command == "stats":
        paths = pipe.write_stats()
        if pipe.ols is not None:
            print((pipe.out / "ols_report.txt").read_text(encoding="utf-8"))
        return paths
    if command == "report":
        return pipe.write_scores() + pipe.write_stats() + pipe.write_figures()
    return pipe.run_all()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "demo":
        from .demo import copy_demo
        print(copy_demo(args.dest))
        return 0
    if args.config is None:
        print("error: --config is required", file=sys.stderr)
        return EXIT_CONFIG
    try:
        config = load_config(args.config)
        if args.out is not None:
            config.out_dir = args.out
        config.provider_config()
        pipe = Pipeline(config, strict=args.strict)
        paths = _execute(pipe, args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MelorigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURES
    for p in paths:
        log.info("wrote %s", p)
    print(pipe.summary())
    return pipe.exit_code()


if __name__ == "__main__":
    sys.exit(main())
