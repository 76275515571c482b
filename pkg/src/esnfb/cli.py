"""Command-line front end.

Three subcommands:

* ``list`` — show the predefined experiments and their arms.
* ``run`` — run one experiment across seeds and write CSV/JSON results.
* ``trace`` — rerun a single episode of an experiment and dump its
  per-step signals as CSV.

Exit status: 0 on success, 1 when an experiment arm produced no successful
episode, 2 on bad arguments or configuration.
"""

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .closed_loop import run_episode
from .errors import EsnfbError
from .harness import (
    apply_overrides,
    episode_seed,
    get_experiment,
    registry,
    run_experiment,
    trace_csv_lines,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="esnfb",
        description="Deterministic closed-loop control experiments with "
        "online-trained echo state network feedforward controllers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="list the predefined experiments")
    p_list.set_defaults(func=cmd_list)

    p_run = sub.add_parser("run", help="run one experiment across seeds")
    p_run.add_argument("--experiment", required=True, help="experiment name (see `esnfb list`)")
    p_run.add_argument("--seeds", type=int, default=None, help="number of seeds (default: the experiment's own)")
    p_run.add_argument("--base-seed", type=int, default=0, help="base seed for per-episode derivation (default 0)")
    p_run.add_argument("--out", default="results", help="output directory (default ./results)")
    p_run.add_argument("--config", default=None, help="JSON file of episode-config overrides applied to every arm")
    p_run.set_defaults(func=cmd_run)

    p_trace = sub.add_parser("trace", help="rerun one episode and dump its per-step signals")
    p_trace.add_argument("--experiment", required=True)
    p_trace.add_argument("--method", required=True, help="arm label (or unique method name) within the experiment")
    p_trace.add_argument("--seed", type=int, default=0, help="episode index within the sweep (default 0)")
    p_trace.add_argument("--base-seed", type=int, default=0)
    p_trace.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    p_trace.add_argument("--config", default=None, help="JSON file of episode-config overrides")
    p_trace.set_defaults(func=cmd_trace)

    return parser


def _load_overrides(path: str | None) -> dict | None:
    if path is None:
        return None
    with open(path, encoding="utf-8") as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        raise EsnfbError(f"config file {path} must hold a JSON object")
    return overrides


def cmd_list(args: argparse.Namespace) -> int:
    for exp in registry():
        arms = ", ".join(a.label for a in exp.arms)
        print(f"{exp.name}: {exp.description}")
        print(f"    arms: {arms}; seeds: {exp.n_seeds}; final window: {exp.final_window}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    exp = get_experiment(args.experiment)
    overrides = _load_overrides(args.config)
    summary = run_experiment(
        exp,
        base_seed=args.base_seed,
        out_dir=args.out,
        n_seeds=args.seeds,
        overrides=overrides,
    )
    status = 0
    for label, res in summary.arms.items():
        n_failed = sum(r["failed"] for r in res.episodes)
        n_ok = len(res.episodes) - n_failed
        stats = summary.to_dict()["arms"][label]["rmse_final"]
        rmse = "n/a" if stats is None else f"{stats['mean']:.4g} +/- {stats['std']:.4g}"
        print(f"{exp.name}/{label}: ok={n_ok} failed={n_failed} rmse_final={rmse}")
        if n_ok == 0:
            status = 1
    print(f"results written to {Path(args.out) / exp.name}")
    return status


def cmd_trace(args: argparse.Namespace) -> int:
    exp = get_experiment(args.experiment)
    matches = [(i, a) for i, a in enumerate(exp.arms) if a.label == args.method]
    if not matches:
        matches = [
            (i, a) for i, a in enumerate(exp.arms) if a.config.method.value == args.method
        ]
    if len(matches) != 1:
        labels = ", ".join(a.label for a in exp.arms)
        raise EsnfbError(
            f"--method {args.method!r} does not select exactly one arm of "
            f"{exp.name!r} (arms: {labels})"
        )
    arm_index, arm = matches[0]
    if args.seed < 0:
        raise EsnfbError(f"--seed must be >= 0, got {args.seed}")
    cfg = arm.config
    overrides = _load_overrides(args.config)
    if overrides:
        cfg = apply_overrides(cfg, overrides)
    cfg = replace(cfg, seed=episode_seed(args.base_seed, arm_index, args.seed))
    trace = run_episode(cfg)
    lines = trace_csv_lines(trace)
    if args.out is None:
        print("\n".join(lines))
    else:
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")
        print(f"trace written to {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EsnfbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
