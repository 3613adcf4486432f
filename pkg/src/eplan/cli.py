"""Command line driver: ``eplan solve|validate|inspect``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .dot import emit_dot
from .epddl import load
from .errors import EplanError
from .kripke import dump
from .possibility import dump_p
from .search import (
    REPRESENTATIONS, STRATEGIES, TRANSITIONS, SearchConfig, make_task, search, state_digest,
    validate_plan,
)

EXIT_OK, EXIT_NO_PLAN, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("eplan")


def _positive(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _non_negative(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="eplan", description="Multi-agent epistemic planner.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", required=True, type=Path)
    common.add_argument("--problem", required=True, type=Path)
    common.add_argument("--representation", choices=REPRESENTATIONS, default="kripke")
    common.add_argument("--transition", choices=TRANSITIONS, default="standard")
    common.add_argument("--dot", type=Path, metavar="DIR", help="write DOT files into DIR")

    solve = sub.add_parser("solve", parents=[common], help="search for a plan")
    solve.add_argument("--strategy", choices=STRATEGIES, default="bfs")
    solve.add_argument("--max-depth", type=_non_negative, default=20)
    solve.add_argument("--max-nodes", type=_positive, default=1_000_000)
    solve.add_argument("--prefer-deeper", action="store_true", help="hbfs tie-break toward deeper nodes")

    validate = sub.add_parser("validate", parents=[common], help="check a plan")
    validate.add_argument("--plan", required=True, help='space separated action names, e.g. "open peek_a"')

    sub.add_parser("inspect", parents=[common], help="print the initial e-state")
    return parser


def _write_dot(directory: Path, states):
    directory.mkdir(parents=True, exist_ok=True)
    for depth, state in enumerate(states):
        path = directory / f"depth_{depth}_{state_digest(state)[:12]}.dot"
        path.write_text(emit_dot(state, f"depth_{depth}"), encoding="utf-8")
        log.info("wrote %s", path)


def _config(args):
    return SearchConfig(
        representation=args.representation,
        transition=args.transition,
        strategy=getattr(args, "strategy", "bfs"),
        max_depth=getattr(args, "max_depth", 20),
        max_nodes=getattr(args, "max_nodes", 1_000_000),
        prefer_deeper=getattr(args, "prefer_deeper", False),
    )


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        domain, problem = load(args.domain, args.problem)
        config = _config(args)
        task = make_task(problem, config.transition, config.representation)

        if args.command == "inspect":
            state = task.initial
            text = dump_p(state) if config.representation == "possibility" else dump(state)
            stdout.write(text)
            stdout.write(f"digest={state_digest(state)}\n")
            if args.dot:
                _write_dot(args.dot, [state])
            return EXIT_OK

        if args.command == "validate":
            result = validate_plan(task, args.plan.split(), config)
            for line in result.trace:
                stdout.write(line + "\n")
            if args.dot:
                _write_dot(args.dot, result.states)
            stdout.write("valid\n" if result.valid else "invalid\n")
            return EXIT_OK if result.valid else EXIT_NO_PLAN

        result = search(task, config)
        if args.dot:
            _write_dot(args.dot, result.trajectory())
        if result.plan is None:
            print("no plan found", file=sys.stderr)
        else:
            stdout.write(result.plan.as_text())
        stdout.write("\n")
        stdout.write(result.stats.as_text())
        return EXIT_OK if result.plan is not None else EXIT_NO_PLAN
    except (EplanError, OSError, ValueError) as exc:
        print(f"eplan: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None):
    level = os.environ.get("EPLAN_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
