"""Command-line front end: run scenarios, run sweeps, list bundled files.

Exit codes: 0 all requested products written and every check passed;
1 at least one check failed; 2 the scenario file failed to parse or
validate (nothing is written in that case).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import NfalError, ScenarioError
from .scenarios import (
    bundled_scenario_path,
    bundled_scenarios,
    run_scenario,
    run_sweep,
)


def _resolve_file(name: str) -> Path:
    path = Path(name)
    if path.exists():
        return path
    return bundled_scenario_path(name if name.endswith(".yaml") else name + ".yaml")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nfal",
        description="Near-field array ambiguity analysis: scenario runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file (or bundled scenario name)")
    p_run.add_argument("scenario", help="path to a scenario .yaml, or a bundled name")
    p_run.add_argument("--out", help="output directory override")
    p_run.add_argument(
        "--workers", type=int, help="override the scenario's worker count"
    )

    p_sweep = sub.add_parser("sweep", help="run a one-parameter sweep file")
    p_sweep.add_argument("scenario", help="path to a sweep .yaml, or a bundled name")
    p_sweep.add_argument("--out", help="output directory override")

    sub.add_parser("list-scenarios", help="list bundled scenario files")

    args = parser.parse_args(argv)

    if args.command == "list-scenarios":
        for name in bundled_scenarios():
            print(name)
        return 0

    try:
        path = _resolve_file(args.scenario)
        if args.command == "run":
            return run_scenario(path, args.out, workers=args.workers)
        return run_sweep(path, args.out)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NfalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
