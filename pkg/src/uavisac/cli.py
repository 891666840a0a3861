"""Command line entry point: ``train``, ``eval`` and ``sweep``.

Log verbosity comes from the ``UAVISAC_LOG`` environment variable
(``WARNING`` by default). Contract errors print one line to stderr and exit
with status 2.
"""
import argparse
import csv
import io
import logging
import os
import sys

from . import harness
from .config import ScenarioConfig, desk_scenario

log = logging.getLogger("uavisac")


def _load_config(args):
    if args.config:
        return ScenarioConfig.from_json(args.config)
    return desk_scenario() if args.desk else ScenarioConfig()


def _out_dir(path):
    os.makedirs(path, exist_ok=True)
    return path


def cmd_train(args):
    from .environment import UavIsacEnv
    from .learner import SacParams, train

    if args.episodes < 1:
        raise ValueError("--episodes must be at least 1")
    cfg = _load_config(args)
    out = _out_dir(args.out)
    params = SacParams(seed=args.seed)
    agent, returns = train(lambda: UavIsacEnv(cfg), params, args.episodes,
                           base_seed=args.base_seed)
    ckpt = os.path.join(out, "agent.json")
    agent.save(ckpt)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("episode", "seed", "episode_return"))
    for e, r in enumerate(returns):
        writer.writerow((e, args.base_seed + e, harness.FLOAT_FMT.format(r)))
    harness.write_text(os.path.join(out, "train_returns.csv"), buf.getvalue())
    cfg.to_json(os.path.join(out, "scenario.json"))
    print(ckpt)
    return 0


def cmd_eval(args):
    cfg = _load_config(args)
    seeds = harness.parse_seeds(args.seeds)
    out = _out_dir(args.out)
    rows = []
    for name in args.policy:
        rows.extend(harness.monte_carlo(cfg, name, seeds, workers=args.workers))
    harness.write_text(os.path.join(out, "eval_rows.csv"), harness.rows_to_csv(rows))
    harness.write_text(os.path.join(out, "eval_summary.csv"),
                       harness.summary_to_csv(harness.aggregate(rows)))
    return 0


def cmd_sweep(args):
    cfg = _load_config(args)
    seeds = harness.parse_seeds(args.seeds)
    values = tuple(float(v) for v in args.values.split(","))
    if args.axis in ("upa", "users"):
        values = tuple(int(v) for v in values)
    harness.RunSpec("sweep", tuple(args.policy), args.config, seeds, 0, args.out,
                    args.axis, values)
    out = _out_dir(args.out)
    rows = harness.sweep(cfg, args.axis, values, args.policy, seeds, args.workers)
    stem = f"sweep_{args.axis}"
    harness.write_text(os.path.join(out, stem + "_rows.csv"), harness.rows_to_csv(rows))
    harness.write_text(os.path.join(out, stem + "_summary.csv"),
                       harness.summary_to_csv(harness.aggregate(rows)))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="uavisac", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="mode", required=True)

    def common(sp):
        sp.add_argument("--config", help="scenario JSON (defaults to the built-in scenario)")
        sp.add_argument("--desk", action="store_true",
                        help="use the reduced desk scenario when no --config is given")
        sp.add_argument("--out", default=".", help="output directory")

    t = sub.add_parser("train", help="train a SAC agent")
    common(t)
    t.add_argument("--episodes", type=int, required=True)
    t.add_argument("--seed", type=int, default=0, help="learner seed")
    t.add_argument("--base-seed", type=int, default=1000, help="seed of the first episode")
    t.set_defaults(func=cmd_train)

    for name, func in (("eval", cmd_eval), ("sweep", cmd_sweep)):
        sp = sub.add_parser(name, help=f"{name} policies over a seed range")
        common(sp)
        sp.add_argument("--policy", action="append", required=True,
                        help="sags, kfrand, random or a checkpoint path; repeatable")
        sp.add_argument("--seeds", default="100..199")
        sp.add_argument("--workers", type=int, default=1)
        sp.set_defaults(func=func)
        if name == "sweep":
            sp.add_argument("--axis", required=True, choices=sorted(harness.SWEEP_AXES))
            sp.add_argument("--values", required=True, help="comma-separated grid values")
    return p


def main(argv=None):
    level = os.environ.get("UAVISAC_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, TypeError) as exc:
        print(f"uavisac {args.mode}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
