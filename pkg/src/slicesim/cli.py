"""Command-line entry points.

Exit codes: 0 success, 2 configuration problem, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, experiment
from .config import ConfigError, load_scenario
from .drl import read_manifest


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicesim",
        description="Two-level bandwidth slicing simulator with learned allocators.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train a learned allocator")
    train.add_argument("--scenario", required=True, help="scenario YAML file")
    train.add_argument("--algorithm", required=True, choices=experiment.LEARNED_ALGORITHMS)
    train.add_argument("--hyper", default=None, help="training plan YAML file")
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--episodes", type=int, default=None, help="override plan episode count")
    train.add_argument("--wic", action="store_true", help="disable isolation constraints")
    train.add_argument("--out", required=True, help="output directory")

    ev = sub.add_parser("eval", help="evaluate an allocator across channel realizations")
    ev.add_argument("--scenario", required=True)
    ev.add_argument(
        "--algorithm",
        required=True,
        choices=experiment.LEARNED_ALGORITHMS + experiment.BASELINE_ALGORITHMS,
    )
    ev.add_argument("--checkpoint", default=None)
    ev.add_argument("--realizations", type=int, default=50)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--episode-len", type=int, default=50)
    ev.add_argument("--users", type=int, default=None, help="rescale total user count")
    ev.add_argument("--out", required=True)

    sw = sub.add_parser("sweep", help="evaluate across a range of total user counts")
    sw.add_argument("--scenario", required=True)
    sw.add_argument(
        "--algorithm",
        required=True,
        choices=experiment.LEARNED_ALGORITHMS + experiment.BASELINE_ALGORITHMS,
    )
    sw.add_argument("--checkpoint", default=None)
    sw.add_argument("--totals", required=True, help="comma-separated total user counts")
    sw.add_argument("--realizations", type=int, default=10)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--out", required=True)

    insp = sub.add_parser("inspect-checkpoint", help="print checkpoint metadata as JSON")
    insp.add_argument("path")
    return parser


def _cmd_train(args) -> int:
    scenario = load_scenario(args.scenario)
    plan = experiment.load_train_plan(args.hyper)
    if args.episodes is not None:
        from dataclasses import replace

        plan = replace(plan, episodes=args.episodes)
    result = experiment.train_system(
        scenario, args.algorithm, plan, args.seed, wic=args.wic, out_dir=Path(args.out)
    )
    print(f"trained {args.algorithm} for {plan.episodes} episodes -> {result.checkpoint_path}")
    return 0


def _cmd_eval(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.users is not None:
        weights = tuple(spec.num_users for spec in scenario.slice_specs)
        scenario = scenario.with_user_counts(experiment.scale_user_counts(args.users, weights))
    result = experiment.evaluate(
        scenario,
        args.algorithm,
        realizations=args.realizations,
        seed=args.seed,
        out_dir=Path(args.out),
        checkpoint_path=args.checkpoint,
        episode_len=args.episode_len,
    )
    print(
        f"evaluated {args.algorithm} over {args.realizations} realizations: "
        f"objective {result.mean_objective:.6f}, satisfaction {result.mean_satisfaction:.6f}, "
        f"cost {result.mean_recon_cost:.6f}"
    )
    return 0


def _cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    totals = [int(t) for t in args.totals.split(",") if t.strip()]
    if not totals:
        raise ConfigError("totals", "no user counts given")
    path = experiment.sweep(
        scenario,
        args.algorithm,
        totals,
        realizations=args.realizations,
        seed=args.seed,
        out_dir=Path(args.out),
        checkpoint_path=args.checkpoint,
    )
    print(f"sweep written to {path}")
    return 0


def _cmd_inspect(args) -> int:
    manifest = read_manifest(args.path)
    print(json.dumps(manifest, indent=2, sort_keys=True))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "train": _cmd_train,
        "eval": _cmd_eval,
        "sweep": _cmd_sweep,
        "inspect-checkpoint": _cmd_inspect,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
