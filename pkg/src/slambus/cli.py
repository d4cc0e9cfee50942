"""Command-line front end.

Subcommands: optimize (one design), sweep (demand range to CSV),
simulate (event and trajectory CSVs), validate (closed forms vs the
grid-search oracle).  Exit codes: 0 success, 1 bad configuration or
failed validation, 2 infeasible design, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import baseline, charging, config, design, oracle, sim, sweep
from .config import Config, ConfigError


def _strategy_inputs(cfg: Config, strategy: str):
    params = config.service_parameters(cfg)
    stats = config.demand_statistics(cfg)
    energy = config.energy_parameters(cfg) if strategy != "core" else None
    return params, stats, energy


def _optimize(cfg: Config, strategy: str, demand: float) -> design.Design:
    params, stats, energy = _strategy_inputs(cfg, strategy)
    if strategy == "core":
        return design.optimize_core(params, stats, demand)
    if strategy == "depot":
        return charging.optimize_depot(params, stats, energy, demand)
    return charging.optimize_mobile(params, stats, energy, demand)


def cmd_optimize(args) -> int:
    cfg = config.load_config(args.config)
    if args.demand <= 0:
        print("optimize: --demand must be positive", file=sys.stderr)
        return 1
    d = _optimize(cfg, args.strategy, args.demand)
    if not d.feasible:
        print(f"INFEASIBLE reason={d.stage.reason} "
              f"threshold={d.stage.threshold:.6g}")
        return 2
    print(f"strategy       {args.strategy}")
    print(f"demand         {args.demand:.6g} pax/h")
    print(f"frequency      {d.frequency:.6g} /h")
    print(f"pods           {d.pods:.6g}")
    if d.pods_int is not None:
        print(f"pods_int       {d.pods_int} (frequency {d.frequency_int:.6g} /h)")
    print(f"stage          {d.stage}")
    print(f"cost_wait      {d.cost_wait:.6g} $/h")
    print(f"cost_invehicle {d.cost_invehicle:.6g} $/h")
    print(f"cost_operator  {d.cost_operator:.6g} $/h")
    print(f"cost_total     {d.cost_total:.6g} $/h")
    print(f"avg_cost       {d.avg_cost:.6g} $/pax")
    return 0


def cmd_sweep(args) -> int:
    cfg = config.load_config(args.config)
    params, stats, energy = _strategy_inputs(cfg, args.strategy)
    rows = sweep.demand_sweep(params, stats, args.lo, args.hi, args.steps,
                              strategy=args.strategy, energy=energy,
                              spacing="log" if args.log else "linear")
    sweep.write_sweep_csv(rows, args.out)
    print(f"wrote {args.out} ({len(rows)} rows)")
    for x, a, b in sweep.detect_stage_boundaries(rows):
        print(f"boundary {a}->{b} at X={x:.6g}")
    return 0


def cmd_simulate(args) -> int:
    cfg = config.load_config(args.config)
    sc = config.sim_config(cfg, strategy=args.strategy, seed=args.seed)
    log = sim.run_simulation(sc)
    sim.write_events_csv(log, args.events)
    sim.write_trajectories_csv(log, args.trajectories)
    stats = sim.waiting_time_stats(log)
    gaps = sim.recharge_gaps(log)
    problems = sim.check_invariants(log)
    print(f"wrote {args.events} ({len(log.events)} events) and {args.trajectories}")
    print(f"boarded {stats['count']} pax, unserved {stats['unserved']}")
    if stats["count"]:
        print(f"wait mean {stats['mean_s']:.2f} s, median {stats['median_s']:.2f} s, "
              f"p95 {stats['p95_s']:.2f} s")
    print(f"recharge gaps: {len(gaps)}")
    if problems:
        print("invariant violations: " + "; ".join(problems), file=sys.stderr)
        return 1
    return 0


def cmd_validate(args) -> int:
    cfg = config.load_config(args.config)
    strategies = ("core", "depot", "mobile") if args.strategy == "all" \
        else (args.strategy,)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    mismatches = 0
    for strategy in strategies:
        for _ in range(args.n):
            params, stats, energy, demand = oracle.random_scenario(rng, strategy)
            closed = _closed_form(params, stats, energy, strategy, demand)
            best = oracle.grid_search(params, stats, demand, strategy, energy)
            report = oracle.compare(closed, best)
            if not report.feasible_match:
                mismatches += 1
            elif report.cost_gap_rel > worst:
                worst = report.cost_gap_rel
    print(f"max cost gap {100.0 * worst:.2f}%")
    if mismatches:
        print(f"feasibility mismatches: {mismatches}", file=sys.stderr)
        return 1
    return 0 if worst <= 0.005 else 1


def _closed_form(params, stats, energy, strategy, demand):
    if strategy == "core":
        return design.optimize_core(params, stats, demand)
    if strategy == "depot":
        return charging.optimize_depot(params, stats, energy, demand)
    return charging.optimize_mobile(params, stats, energy, demand)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slambus",
        description="Design optimization for stop-less modular bus services.")
    parser.add_argument("--config", default=None,
                        help="configuration file (default: SLAM_CONFIG or built-in)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="optimal design at one demand level")
    p.add_argument("--strategy", choices=("core", "depot", "mobile"),
                   default="core")
    p.add_argument("--demand", type=float, required=True, help="pax/h")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="designs over a demand range, to CSV")
    p.add_argument("--strategy", choices=("core", "depot", "mobile"),
                   default="core")
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--log", action="store_true", help="logarithmic demand grid")
    p.add_argument("--out", default="sweep.csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="discrete-event simulation to CSVs")
    p.add_argument("--strategy", choices=("depot", "mobile"), default="depot")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--events", default="events.csv")
    p.add_argument("--trajectories", default="trajectories.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="closed forms vs grid-search oracle")
    p.add_argument("--strategy", choices=("all", "core", "depot", "mobile"),
                   default="all")
    p.add_argument("--n", type=int, default=100, help="scenarios per strategy")
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
