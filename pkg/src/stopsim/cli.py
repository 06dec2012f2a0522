"""Command-line interface.

Verbs:
    run <scenario-file> [--strategy X] [--out DIR]
    paper-scenario --strategy {tightening|conservative|none} [--out DIR]
    corridor [--out DIR]
    compare <summary files...> [--out DIR]
    validate <scenario-file>

Exit codes: 0 success, 1 validation error, 2 collision-terminated trial.
With --out, a trial writes telemetry.csv, summary.json, config.json and a
speed_profile.png figure into the directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report, sim
from .scenario import (ScenarioError, load_config, save_config, validate,
                       with_strategy)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_COLLISION = 2

STRATEGY_CHOICES = ("tightening", "conservative", "none")


class _Parser(argparse.ArgumentParser):
    """Argparse that exits with the validation code on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def _build_parser() -> _Parser:
    parser = _Parser(prog="stopsim",
                     description="Stopping-region collision avoidance "
                                 "simulator")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for randomized scenario generation; "
                             "echoed (trials themselves are deterministic)")
    sub = parser.add_subparsers(dest="verb", required=True)

    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario", type=Path)
    run.add_argument("--strategy", choices=STRATEGY_CHOICES, default=None,
                     help="override every agent's strategy")
    run.add_argument("--out", type=Path, default=None)

    paper = sub.add_parser("paper-scenario",
                           help="run the stopped-cyclist benchmark")
    paper.add_argument("--strategy", choices=STRATEGY_CHOICES, required=True)
    paper.add_argument("--out", type=Path, default=None)

    corridor = sub.add_parser("corridor",
                              help="run the head-on corridor benchmark")
    corridor.add_argument("--out", type=Path, default=None)

    cmp_ = sub.add_parser("compare", help="compare trial summaries")
    cmp_.add_argument("summaries", nargs="+", type=Path)
    cmp_.add_argument("--out", type=Path, default=None)

    val = sub.add_parser("validate", help="validate a scenario file")
    val.add_argument("scenario", type=Path)
    return parser


def _finish_trial(config, out_dir: Path | None) -> int:
    log = sim.run_trial(config)
    summary = report.summarize(log)
    print(report.ComparisonTable((summary,)).to_text())
    if log.collided:
        ev = log.events[0]
        print(f"collision: {ev.agent_a} vs {ev.agent_b} at t={ev.t:.2f}s "
              f"(penetration {ev.penetration:.3f} m)")
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        report.write_csv(log, out_dir / "telemetry.csv")
        report.write_summary(summary, out_dir / "summary.json")
        save_config(config, out_dir / "config.json")
        from . import plotting
        profiles = [report.speed_profile(log, a.agent_id)
                    for a in config.agents
                    if a.guidance.kind != "stationary"]
        stationary = next((a for a in config.agents
                           if a.guidance.kind == "stationary"), None)
        obstacle = None
        if stationary is not None:
            obstacle = stationary.paths[0].point_at_extended(stationary.s0)[0]
        plotting.render_speed_profiles(
            profiles, out_dir / "speed_profile.png",
            obstacle_position=obstacle,
            title=config.metadata.get("name", "trial"))
        print(f"artifacts written to {out_dir}")
    return EXIT_COLLISION if log.collided else EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None:
        print(f"seed: {args.seed}")

    try:
        if args.verb == "validate":
            load_config(args.scenario)
            print(f"{args.scenario}: valid")
            return EXIT_OK

        if args.verb == "run":
            config = load_config(args.scenario)
            if args.strategy is not None:
                config = with_strategy(config, sim._as_strategy(args.strategy))
                validate(config)
            return _finish_trial(config, args.out)

        if args.verb == "paper-scenario":
            return _finish_trial(sim.cyclist_scenario(args.strategy), args.out)

        if args.verb == "corridor":
            return _finish_trial(sim.corridor_scenario(), args.out)

        if args.verb == "compare":
            summaries = [report.read_summary(p) for p in args.summaries]
            table = report.compare(summaries)
            print(table.to_text())
            if args.out is not None:
                args.out.mkdir(parents=True, exist_ok=True)
                (args.out / "comparison.txt").write_text(table.to_text() + "\n",
                                                         encoding="utf-8")
                with open(args.out / "comparison.json", "w",
                          encoding="utf-8") as fh:
                    json.dump(table.to_dict(), fh, indent=2, sort_keys=True)
                    fh.write("\n")
                print(f"artifacts written to {args.out}")
            return EXIT_OK
    except ScenarioError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    raise AssertionError("unreachable verb")


if __name__ == "__main__":
    sys.exit(main())
