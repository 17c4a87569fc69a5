import argparse
import json
import logging
import sys
from typing import List, Optional

from tqdm import tqdm

from .environments import render
from .runner import EXIT_EXPECTATION, EXIT_LIMIT, EXIT_OK, EXIT_PARSE, SCHEMA_VERSION, repl, run_file

_SEVERITY = [EXIT_OK, EXIT_EXPECTATION, EXIT_LIMIT, EXIT_PARSE]


def worst(statuses) -> int:
    """Combined exit status: parse errors over limits over failed expectations."""
    return max(statuses, key=_SEVERITY.index, default=EXIT_OK)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ascribe", description="Run nested-belief dialogue scenarios.")
    parser.add_argument("--max-depth", type=int, default=None, help="maximum viewpoint depth (default 5)")
    parser.add_argument("--max-steps", type=int, default=None, help="planner step bound (default 8)")
    parser.add_argument("--max-nodes", type=int, default=None, help="planner node budget (default 200000)")
    parser.add_argument(
        "--library", action="append", default=[], metavar="FILE", help="act/operator library to load, repeatable"
    )
    parser.add_argument("--no-default-library", action="store_true", help="start without the shipped act library")
    parser.add_argument("--format", choices=["ascii", "json"], default="ascii", help="format of the final stores")
    parser.add_argument("--trace", metavar="FILE", default=None, help="write the JSON trace to FILE")
    parser.add_argument("-v", "--verbose", action="count", default=0)

    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="run scenario files")
    run_parser.add_argument("files", nargs="+", metavar="FILE")
    sub.add_parser("repl", help="interactive session")
    return parser


def _config(args) -> dict:
    config = {}
    if args.max_depth is not None:
        config["max_depth"] = args.max_depth
    if args.max_steps is not None:
        config["max_steps"] = args.max_steps
    if args.max_nodes is not None:
        config["max_nodes"] = args.max_nodes
    if args.no_default_library:
        config["default_library"] = False
    return config


def _shown(result) -> list:
    """Final stores worth printing, the System store when all are empty."""
    shown = [s for s in result.stores.values() if s.environments or s.topics or s.trust or s.stereotypes]
    return shown or [result.store]


def _run(args) -> int:
    config = _config(args)
    files = args.files
    results = []
    for path in tqdm(files, disable=len(files) < 2, desc="scenarios", file=sys.stderr):
        result = run_file(path, config, libraries=args.library)
        results.append(result)
        if len(files) > 1:
            print(f"== {path} (exit {result.status})")
        for text in result.output:
            print(text)
        for store in _shown(result):
            print(render(store, args.format))

    if args.trace is not None:
        if len(results) == 1:
            text = results[0].trace.to_json()
        else:
            runs = [{"file": path, "status": r.status, **r.trace.to_dict()} for path, r in zip(files, results)]
            text = json.dumps({"schema_version": SCHEMA_VERSION, "runs": runs}, indent=2, sort_keys=True)
        with open(args.trace, "w") as f:
            f.write(text + "\n")
    return worst(r.status for r in results)


def _repl(args) -> int:
    def lines():
        while True:
            try:
                yield input("ascribe> ")
            except EOFError:
                return

    runner = repl(lines(), print, _config(args), libraries=args.library)
    if args.trace is not None:
        with open(args.trace, "w") as f:
            f.write(runner.trace.to_json() + "\n")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "run":
        return _run(args)
    return _repl(args)
