"""Command-line interface: parse, solve, prune, graph, plan, bench.

Exit codes: 0 success, 1 no answer / no plan, 2 usage error, 3 timeout
or budget exhausted, 4 parse or scene-schema error.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .bench import format_csv, format_markdown, run_bench
from .engine import BudgetExceeded, FlounderError, SolveConfig, SolveTimeout, solve
from .parser import ParseError, parse_program, parse_query
from .planner import (
    TASK_CATALOG,
    PlanOptions,
    UnresolvableTask,
    execute_plan,
    goal_satisfied,
    plan,
)
from .program import format_program
from .relevance import build_depgraph, prune_program, to_dot
from .world import SchemaError, WorldState, load_scene, random_scene

EXIT_OK = 0
EXIT_NO_ANSWER = 1
EXIT_USAGE = 2
EXIT_TIMEOUT = 3
EXIT_PARSE = 4


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _parse_query_arg(text: str):
    """Queries may be given with or without the leading ?- marker."""
    stripped = text.strip()
    if not stripped.startswith("?-"):
        stripped = "?- " + stripped
    return parse_query(stripped)


def _load_scene_arg(value: str) -> WorldState:
    """A scene argument is either a file path or random:SEED:N."""
    if value.startswith("random:"):
        parts = value.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected random:SEED:N, got {value!r}")
        return random_scene(int(parts[1]), int(parts[2]))
    return load_scene(_read_text(value))


def _solve_config(args: argparse.Namespace) -> SolveConfig:
    trace = None
    if getattr(args, "trace", False):
        trace = lambda line: print(line, file=sys.stderr)
    return SolveConfig(
        max_depth=args.max_depth,
        step_budget=args.steps,
        loop_check=not args.no_loop_check,
        wall_timeout=args.timeout,
        trace=trace,
    )


def _cmd_parse(args: argparse.Namespace) -> int:
    program = parse_program(_read_text(args.file))
    print(format_program(program), end="")
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    program = parse_program(_read_text(args.file))
    goals = _parse_query_arg(args.query)
    count = 0
    try:
        for answer in solve(program, goals, _solve_config(args)):
            print(answer)
            count += 1
    except FlounderError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NO_ANSWER
    except (SolveTimeout, BudgetExceeded) as e:
        print(f"stopped: {e}", file=sys.stderr)
        return EXIT_TIMEOUT
    if count == 0:
        print("no answers.", file=sys.stderr)
        return EXIT_NO_ANSWER
    return EXIT_OK


def _cmd_prune(args: argparse.Namespace) -> int:
    program = parse_program(_read_text(args.file))
    goals = _parse_query_arg(args.query)
    text = format_program(prune_program(program, goals))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_graph(args: argparse.Namespace) -> int:
    program = parse_program(_read_text(args.file))
    goals = _parse_query_arg(args.query)
    dot = to_dot(build_depgraph(program, goals))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as f:
            f.write(dot)
    else:
        print(dot, end="")
    return EXIT_OK


def _cmd_plan(args: argparse.Namespace) -> int:
    scene = _load_scene_arg(args.scene)
    task = TASK_CATALOG[args.task]
    options = PlanOptions(
        prune=not args.no_prune,
        max_plan_len=args.max_len,
        config=SolveConfig(wall_timeout=args.timeout),
    )
    try:
        actions = plan(scene, task, options)
    except UnresolvableTask as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NO_ANSWER
    except SolveTimeout as e:
        print(f"timeout: {e}", file=sys.stderr)
        return EXIT_TIMEOUT
    except BudgetExceeded as e:
        print(f"stopped: {e}", file=sys.stderr)
        return EXIT_TIMEOUT
    if actions is None:
        print("no plan found.", file=sys.stderr)
        return EXIT_NO_ANSWER
    final = execute_plan(scene, actions)
    if not goal_satisfied(final, task):
        print("error: plan failed validation", file=sys.stderr)
        return EXIT_NO_ANSWER
    for action in actions:
        print(action)
    print("GOAL SATISFIED")
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    scene = _load_scene_arg(args.scene)
    if args.tasks == "all":
        names = list(TASK_CATALOG)
    else:
        names = [n.strip() for n in args.tasks.split(",") if n.strip()]
        unknown = [n for n in names if n not in TASK_CATALOG]
        if unknown:
            print(f"unknown tasks: {', '.join(unknown)}", file=sys.stderr)
            return EXIT_USAGE
    report = run_bench(
        scene,
        [TASK_CATALOG[n] for n in names],
        timeout=args.timeout,
        repeats=args.repeats,
        parallel=args.parallel,
    )
    formatter = format_csv if args.format == "csv" else format_markdown
    print(formatter(report), end="")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homelog",
        description="Logic-programming engine with query-relevance pruning "
        "and a household planning domain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="syntax-check a program and pretty-print it")
    p.add_argument("file")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("solve", help="run a query and print each answer")
    p.add_argument("file")
    p.add_argument("-q", "--query", required=True)
    p.add_argument("--max-depth", type=int, default=10_000)
    p.add_argument("--steps", type=int, default=5_000_000)
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--no-loop-check", action="store_true")
    p.add_argument("--trace", action="store_true", help="log derivation steps to stderr")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("prune", help="remove clauses irrelevant to a query")
    p.add_argument("file")
    p.add_argument("-q", "--query", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_prune)

    p = sub.add_parser("graph", help="emit the predicate dependency graph as DOT")
    p.add_argument("file")
    p.add_argument("-q", "--query", required=True)
    p.add_argument("--dot", help="output file (default stdout)")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("plan", help="plan a task in a scene and print the actions")
    p.add_argument("--scene", required=True, help="scene file or random:SEED:N")
    p.add_argument("--task", required=True, choices=sorted(TASK_CATALOG))
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--timeout", type=float, default=None)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("bench", help="compare pruned vs unpruned planning times")
    p.add_argument("--scene", required=True, help="scene file or random:SEED:N")
    p.add_argument("--tasks", default="all", help="comma-separated names or 'all'")
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--format", choices=("md", "csv"), default="md")
    p.add_argument("--parallel", action="store_true")
    p.set_defaults(func=_cmd_bench)

    return parser


def cli_main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except SchemaError as e:
        print(f"scene error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
