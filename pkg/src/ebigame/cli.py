"""Command-line entry point.

Exit codes: 0 success, 1 unreadable or invalid scenario, 2 numerical or
runtime failure while running it.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources

from .errors import ScenarioParseError, ValidationError
from .runner import FORMATS, emit, run
from .scenario import loads_scenario, parse_scenario

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


def demo_scenario_text() -> str:
    return resources.files("ebigame").joinpath("data/demo_scenario.json").read_text(encoding="utf-8")


def _load(args):
    if args.command == "demo" and args.scenario is None:
        scenario = loads_scenario(demo_scenario_text())
    else:
        scenario = parse_scenario(args.scenario)
    if args.seed_override is not None:
        scenario = scenario.with_seed(args.seed_override)
    return scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ebigame", description="Run equity-incentive game scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("run", "run a scenario file and write reports"),
                            ("validate", "check a scenario file and list every problem"),
                            ("demo", "run the bundled demo scenario")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", required=(name != "demo"), default=None,
                       help="scenario file (JSON, schema_version 1)")
        p.add_argument("--seed-override", type=int, default=None, help="replace the scenario's seed")
        if name != "validate":
            p.add_argument("--out", default="reports", help="output directory (default: reports)")
            p.add_argument("--format", choices=FORMATS, default="json-like", help="report format")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = _load(args)
    except ScenarioParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as exc:
        for path, msg in exc.errors:
            print(f"invalid: {path}: {msg}", file=sys.stderr)
        return EXIT_INVALID

    if args.command == "validate":
        blocks = [b for b in ("stage1", "stage2", "coalition", "prodfn") if getattr(scenario, b) is not None]
        print(f"ok: {scenario.name} (seed {scenario.seed}; blocks: {', '.join(blocks) or 'none'})")
        return EXIT_OK

    try:
        report = run(scenario)
        paths = emit(report, args.format, args.out)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        print(f"run failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for path in paths:
        print(path)
    print(f"done in {report.wall_time:.2f} s", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
