"""Command-line surface: cluster / eval / synth / bench subcommands.

Reports are JSON (schema "mcdc-report/1"); label files hold one integer
per line. All randomness flows from --seed, so identical invocations
produce byte-identical label files and identical non-timing report fields.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import backend
from .aggregate import AggregationError, run_aggregation
from .bench import run_bench
from .dataset import (
    DatasetError,
    SynthSpec,
    drop_missing,
    generate_synthetic,
    load_csv,
    load_labels,
    save_csv,
    save_labels,
)
from .learner import (
    DEFAULT_ETA,
    LearnerError,
    run_multigranular,
    run_single_granularity,
)
from .metrics import all_indices

REPORT_SCHEMA = "mcdc-report/1"
VARIANTS = ("full", "mcdc1", "mcdc2", "mcdc3", "mcdc4", "kmodes")


class CliError(Exception):
    pass


def _run_variant(ds, variant, k, eta, k0, seed, caps, flags, kernel):
    """One clustering run; returns (labels, report fragment)."""
    info = {"kappa": None, "sigma": None, "theta": None,
            "multigranular_converged": None, "aggregation_converged": None,
            "gamma": None}
    timings = {}
    need_ladder = variant in ("full", "mcdc3", "mcdc4")

    if need_ladder:
        t0 = time.perf_counter()
        mg = run_multigranular(
            ds, eta=eta, k0=k0, seed=seed,
            max_passes=caps["max_passes"], max_epochs=caps["max_epochs"],
            keep_mean_prefactor=flags["literal_mean_similarity"],
            random_reseed=flags["random_reseed"],
            stop_on_partition=flags["stop_on_partition"],
            cumulative_wins=flags["cumulative_wins"],
            kernel=kernel,
        )
        timings["learn_s"] = time.perf_counter() - t0
        info["kappa"] = mg.kappa
        info["sigma"] = mg.sigma
        info["multigranular_converged"] = mg.converged
        info["gamma"] = mg.encoding()

    if variant == "mcdc3":
        return mg.partitions[-1], info, timings

    if variant in ("full", "mcdc4"):
        sought = k if k is not None else mg.kappa[-1]
        t0 = time.perf_counter()
        labels, theta, came_ok = run_aggregation(
            mg.encoding(), sought, seed=seed, max_iter=caps["max_iter"],
            weighting=(variant == "full"), frozen_modes=flags["frozen_modes"],
        )
        timings["aggregate_s"] = time.perf_counter() - t0
        info["theta"] = [float(x) for x in theta]
        info["aggregation_converged"] = came_ok
        return labels, info, timings

    if variant == "kmodes":
        if k is None:
            raise CliError("--k is required with --variant kmodes")
        t0 = time.perf_counter()
        labels, theta, came_ok = run_aggregation(
            ds.values, k, seed=seed, max_iter=caps["max_iter"], weighting=False,
        )
        timings["aggregate_s"] = time.perf_counter() - t0
        info["aggregation_converged"] = came_ok
        return labels, info, timings

    # Single-granularity ablations need the sought k up front.
    if k is None:
        raise CliError(f"--k is required with --variant {variant}")
    t0 = time.perf_counter()
    if variant == "mcdc2":
        labels = run_single_granularity(
            ds, k + 2, eta=eta, seed=seed, max_passes=caps["max_passes"],
            competition=True, penalty=False, learn_weights=False,
            cumulative_wins=flags["cumulative_wins"], kernel=kernel,
        )
    else:  # mcdc1: competition-free iterative max-similarity assignment
        labels = run_single_granularity(
            ds, k, eta=eta, seed=seed, max_passes=caps["max_passes"],
            competition=False, penalty=False, learn_weights=False, kernel=kernel,
        )
    timings["learn_s"] = time.perf_counter() - t0
    return labels, info, timings


def cmd_cluster(args) -> int:
    ds = load_csv(args.input, has_header=not args.no_header,
                  label_column_name=args.label_column,
                  missing_token=args.missing_token)
    if args.drop_missing:
        ds = drop_missing(ds)
    truth = ds.label_column
    kernel = backend.get_backend(args.backend)
    caps = {"max_passes": args.max_passes, "max_epochs": args.max_epochs,
            "max_iter": args.max_iter}
    flags = {"literal_mean_similarity": args.literal_mean_similarity,
             "random_reseed": args.random_reseed,
             "frozen_modes": args.frozen_modes,
             "stop_on_partition": args.stop_on_partition,
             "cumulative_wins": args.cumulative_wins}

    runs = []
    for t in range(args.repeats):
        seed = args.seed + t
        labels, info, timings = _run_variant(
            ds, args.variant, args.k, args.eta, args.k0, seed, caps, flags, kernel,
        )
        entry = {"seed": seed, "labels": labels, "info": info, "timings": timings}
        if truth is not None:
            entry["indices"] = all_indices(labels, truth)
        runs.append(entry)

    first = runs[0]
    report = {
        "schema": REPORT_SCHEMA,
        "backend": kernel.BACKEND_NAME,
        "config": {
            "input": args.input, "variant": args.variant, "eta": args.eta,
            "k0": args.k0, "k": args.k, "seed": args.seed,
            "repeats": args.repeats, "missing_token": args.missing_token,
            "label_column": args.label_column, "caps": caps, "flags": flags,
        },
        "n": ds.n,
        "d": ds.d,
        "kappa": first["info"]["kappa"],
        "sigma": first["info"]["sigma"],
        "theta": first["info"]["theta"],
        "multigranular_converged": first["info"]["multigranular_converged"],
        "aggregation_converged": first["info"]["aggregation_converged"],
        "timings": first["timings"],
    }
    if truth is not None:
        per_run = [r["indices"] for r in runs]
        report["indices"] = {
            name: {
                "mean": float(np.mean([x[name] for x in per_run])),
                "std": float(np.std([x[name] for x in per_run])),
                "runs": [float(x[name]) for x in per_run],
            }
            for name in ("acc", "ari", "ami", "fm")
        }

    save_labels(first["labels"], args.labels_out)
    if args.emit_gamma:
        gamma = first["info"]["gamma"]
        if gamma is None:
            raise CliError("--emit-gamma requires a variant that runs the "
                           "multi-granular learner")
        np.savetxt(args.emit_gamma, gamma, fmt="%d", delimiter=",")

    text = json.dumps(report, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_eval(args) -> int:
    pred = load_labels(args.pred)
    truth = load_labels(args.truth)
    if len(pred) != len(truth):
        raise CliError(
            f"label files differ in length: {len(pred)} vs {len(truth)}"
        )
    print(json.dumps(all_indices(pred, truth), indent=2))
    return 0


def cmd_synth(args) -> int:
    spec = SynthSpec(n=args.n, d=args.d, k_true=args.k, purity=args.purity,
                     values_per_feature=args.m, seed=args.seed)
    ds, truth = generate_synthetic(spec)
    save_csv(ds, f"{args.output}.csv")
    save_labels(truth, f"{args.output}.labels")
    return 0


def cmd_bench(args) -> int:
    grid = [int(x) for x in args.grid.split(",")]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise CliError("grid must be strictly increasing")
    kernel = backend.get_backend(args.backend)

    rows = run_bench(
        args.axis, grid, repeats=args.repeats, n=args.n, d=args.d, k=args.k,
        k_true=args.k_true, m=args.m, purity=args.purity, seed=args.seed,
        eta=args.eta, k0=args.k0, kernel=kernel, max_passes=args.max_passes,
        max_epochs=args.max_epochs, max_iter=args.max_iter,
    )

    lines = ["point,mean_time,std\n"]
    lines += [f"{p},{m:.6f},{s:.6f}\n" for p, m, s in rows]
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.writelines(lines)
    else:
        sys.stdout.writelines(lines)
    return 0


def _add_common_run_args(p):
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.add_argument("--k0", type=int, default=None,
                   help="initial cluster count (default: floor(sqrt(n)))")
    p.add_argument("--k", type=int, default=None, help="sought cluster count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-passes", type=int, default=100)
    p.add_argument("--max-epochs", type=int, default=50)
    p.add_argument("--max-iter", type=int, default=100,
                   help="aggregation iteration cap")
    p.add_argument("--backend", choices=("auto", "compiled", "python"),
                   default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catclust",
        description="Multi-granular competitive clustering for categorical data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a CSV file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None, help="report JSON path (default stdout)")
    p.add_argument("--labels-out", default="labels.txt")
    p.add_argument("--label-column", default=None)
    p.add_argument("--missing-token", default="?")
    p.add_argument("--drop-missing", action="store_true",
                   help="drop rows containing missing cells before clustering "
                        "(by default missing cells simply contribute no "
                        "similarity)")
    p.add_argument("--no-header", action="store_true")
    p.add_argument("--variant", choices=VARIANTS, default="full")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--emit-gamma", default=None,
                   help="write the granularity encoding matrix as CSV")
    p.add_argument("--literal-mean-similarity", action="store_true",
                   help="keep the 1/d prefactor inside weighted similarity")
    p.add_argument("--random-reseed", action="store_true",
                   help="re-seed every epoch from random objects instead of "
                        "carrying survivor memberships")
    p.add_argument("--frozen-modes", action="store_true",
                   help="pin aggregation modes to their initial sample")
    p.add_argument("--stop-on-partition", action="store_true",
                   help="also stop the epoch ladder on identical partitions")
    p.add_argument("--cumulative-wins", action="store_true",
                   help="accumulate the winning-ratio handicap over the whole "
                        "epoch instead of per pass")
    _add_common_run_args(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("eval", help="score a label file against ground truth")
    p.add_argument("pred")
    p.add_argument("truth")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic categorical dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, default=5, help="values per feature")
    p.add_argument("--purity", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="output path prefix")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("bench", help="time the pipeline along one scaling axis")
    p.add_argument("--axis", choices=("n", "d", "k"), required=True)
    p.add_argument("--grid", required=True, help="comma-separated increasing values")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--n", type=int, default=None,
                   help="fixed dataset size (default depends on axis)")
    p.add_argument("--d", type=int, default=None,
                   help="fixed feature count (default depends on axis)")
    p.add_argument("--k-true", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--purity", type=float, default=0.9)
    p.add_argument("--output", default=None)
    _add_common_run_args(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and args.k0 is None:
        args.k0 = 16   # a fixed k0 keeps per-object work constant across the grid
    if args.command == "bench" and args.k is None:
        args.k = 3
    try:
        return args.func(args)
    except (CliError, DatasetError, LearnerError, AggregationError,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
