"""Command-line entry point: ``noshow-window <verb> [options]``."""
from __future__ import annotations

import argparse
import json
import sys

from . import experiments as ex
from .showup import DELAY_MAPS

VERBS = ("tables", "curves", "levers", "joint", "simulate")


def build_parser():
    p = argparse.ArgumentParser(prog="noshow-window",
                                description="Scheduling-window experiments.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--config", help="YAML file overlaid on the packaged defaults")
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--delay-map", choices=DELAY_MAPS + ("both",),
                   help="override the configured delay map(s)")
    p.add_argument("--k-step", type=int, help="window grid step")
    p.add_argument("--seed", type=int, help="base seed for simulations")
    p.add_argument("--workers", type=int, help="process-pool size")
    p.add_argument("--strict", action="store_true",
                   help="exit nonzero when any cell failed")
    return p


def _errors(records):
    return sum(1 for r in records if r.get("error"))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = ex.load_config(args.config)
        maps = None
        if args.delay_map == "both":
            maps = list(DELAY_MAPS)
        elif args.delay_map:
            maps = [args.delay_map]
        cfg = cfg.with_overrides(k_step=args.k_step, seed=args.seed, delay_maps=maps)
        if args.workers:
            cfg.raw["workers"] = args.workers
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.verb == "tables":
        run = ex.run_tables(cfg, args.out)
        errors = run.errors
        best = run.summary["best_delay_map"]
        stats = run.summary["delay_maps"][best].get("md_vs_mm", {})
        print(f"best delay map: {best}")
        if stats and stats["cells"]:
            loss = stats["mean_loss_percent"]
            print(f"window match rate {stats['match_rate_percent']:.1f}%, mean loss "
                  + ("n/a" if loss is None else f"{loss:.3f}%"))
    elif args.verb == "curves":
        ex.run_curves(cfg, args.out)
        errors = 0
    elif args.verb == "levers":
        errors = _errors(ex.run_levers(cfg, args.out))
    elif args.verb == "joint":
        records, summary = ex.run_joint(cfg, args.out)
        errors = _errors(records)
        print(json.dumps(summary, sort_keys=True))
    else:
        errors = _errors(ex.run_simulation(cfg, args.out))
    print(f"wrote {args.out} ({errors} failed cells)")
    return 1 if args.strict and errors else 0


if __name__ == "__main__":
    sys.exit(main())
