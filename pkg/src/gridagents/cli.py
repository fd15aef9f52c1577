"""Command line entry points: run, compare, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .scenario import (
    DEFAULT_MAX_TICKS,
    compare_deliberators,
    load_scenario,
    run_scenario,
    trace_metrics,
)
from .world import parse_map

DELIBERATOR_CHOICES = ("belief", "omniscient", "oblivious")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gridagents",
        description="Deterministic grid-world NPC simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario headless and emit the trace")
    run_p.add_argument("--map", required=True, type=Path)
    run_p.add_argument("--scenario", required=True, type=Path)
    run_p.add_argument("--deliberator", choices=DELIBERATOR_CHOICES, default="belief")
    run_p.add_argument("--max-ticks", type=int, default=DEFAULT_MAX_TICKS)
    run_p.add_argument("--trace", type=Path, help="write trace JSONL here instead of stdout")

    cmp_p = sub.add_parser("compare", help="run one scenario under every deliberator")
    cmp_p.add_argument("--map", required=True, type=Path)
    cmp_p.add_argument("--scenario", required=True, type=Path)
    cmp_p.add_argument("--out", required=True, type=Path)
    cmp_p.add_argument("--max-ticks", type=int, default=DEFAULT_MAX_TICKS)

    serve_p = sub.add_parser("serve", help="serve a live simulation over websocket")
    serve_p.add_argument("--map", required=True, type=Path)
    serve_p.add_argument("--port", type=int, default=8000)
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--deliberator", choices=DELIBERATOR_CHOICES, default="belief")
    serve_p.add_argument("--tick-rate", type=float, default=5.0)

    args = parser.parse_args(argv)
    if args.command == "run":
        return _run(args)
    if args.command == "compare":
        return _compare(args)
    return _serve(args)


def _run(args) -> int:
    world = parse_map(args.map.read_text())
    scenario = load_scenario(args.scenario.read_text(), world)
    trace = run_scenario(world, scenario, args.deliberator, args.max_ticks)
    if args.trace:
        args.trace.write_text(trace.to_jsonl())
    else:
        sys.stdout.write(trace.to_jsonl())
    metrics = trace_metrics(trace, "npc0", args.deliberator)
    print(
        f"# {args.deliberator}: ticks={metrics.total_ticks}"
        f" reached_goal={metrics.reached_goal}"
        f" blocked_attempts={metrics.blocked_attempts}"
        f" plans={metrics.plans_computed}",
        file=sys.stderr,
    )
    return 0


def _compare(args) -> int:
    report = compare_deliberators(
        args.map.read_text(), args.scenario.read_text(), max_ticks=args.max_ticks
    )
    args.out.write_text(json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n")
    for kind, metrics in report.metrics.items():
        print(
            f"{kind}: blocked={metrics.blocked_attempts}"
            f" clairvoyant={metrics.clairvoyant_plan_changes}"
            f" reached={metrics.reached_goal}"
            f" ticks_to_goal={metrics.ticks_to_goal}"
        )
    return 0


def _serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(args.map.read_text(), args.deliberator, args.tick_rate)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
