#!/usr/bin/env python3
"""Seed sweeps for the statistical properties, run across worker processes.

Usage: python scripts/sweep.py <frt|dynamic|line> [--seeds N] [--workers N]

Examples:
    python scripts/sweep.py frt --seeds 1000
    python scripts/sweep.py dynamic --seeds 100 --workers 8
    python scripts/sweep.py line --seeds 500 --k 128

Every seed is an independent run confined to one worker; results are gathered and
summarized in one table.
"""

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from statistics import mean

import numpy as np
from rich.console import Console
from rich.table import Table

from rematch.adversaries import GENERATORS
from rematch.adversaries.randomized import random_metric
from rematch.bootstrap import create_algorithm, resolve_checks
from rematch.errors import InvariantViolation
from rematch.harness.runner import replay
from rematch.hst import frt_sample

console = Console()

FRT_POINTS = 32
FRT_METRIC_SEED = 2024

Row = dict[str, float | str]


def frt_run(seed: int) -> Row:
    metric = random_metric("general", FRT_POINTS, np.random.default_rng(FRT_METRIC_SEED))
    tree = frt_sample(metric, seed)
    base = metric.distance_matrix()
    stretched = tree.distance_matrix()
    off = ~np.eye(FRT_POINTS, dtype=bool)
    ratios = stretched[off] / base[off]
    return {
        "seed": seed,
        "depth": tree.depth,
        "dominates": float(bool((ratios >= 1.0).all())),
        "mean_stretch": float(ratios.mean()),
    }


def dynamic_run(seed: int) -> Row:
    instance = GENERATORS["random-dynamic"].generate({"n_points": 64, "n_events": 200}, seed)
    algorithm = create_algorithm("nearest-match", instance.metric, instance.servers, hst_seed=seed)
    try:
        trace = replay(algorithm, instance, resolve_checks("all"))
    except InvariantViolation as e:
        return {"seed": seed, "failed": 1.0, "detail": str(e)}
    tree_ratios = [
        row.tree_alg_cost / row.tree_opt_cost  # type: ignore[attr-defined]
        for row in trace.rows
        if row.tree_opt_cost > 0  # type: ignore[attr-defined]
    ]
    return {
        "seed": seed,
        "failed": 0.0,
        "max_ratio": trace.max_ratio,
        "max_tree_ratio": max(tree_ratios, default=0.0),
        "max_step_recourse": max((row.step_recourse for row in trace.rows), default=0),
        "depth": algorithm.depth,  # type: ignore[attr-defined]
    }


def first_cost_mismatch(left: list, right: list) -> int | None:
    """Index of the first row where two cost columns differ (None when they agree)."""
    if len(left) != len(right):
        return min(len(left), len(right))
    for i, (a, b) in enumerate(zip(left, right, strict=True)):
        if a != b:
            return i
    return None


def line_run(args: tuple[int, int]) -> Row:
    seed, k = args
    instance = GENERATORS["random-line"].generate({"n": 2 * k, "k": k}, seed)
    results: Row = {"seed": seed}
    costs = {}
    for name in ("farthest-server", "recursive-cancel"):
        algorithm = create_algorithm(name, instance.metric, instance.servers)
        try:
            trace = replay(algorithm, instance, resolve_checks("all"))
        except InvariantViolation as e:
            return {"seed": seed, "failed": 1.0, "detail": str(e)}
        costs[name] = [row.alg_cost for row in trace.rows]
        results[f"{name}_ratio"] = trace.max_ratio
        results[f"{name}_recourse"] = trace.total_recourse

    mismatch = first_cost_mismatch(costs["farthest-server"], costs["recursive-cancel"])
    if mismatch is not None:
        return {
            "seed": seed,
            "failed": 1.0,
            "detail": f"farthest-server and recursive-cancel costs differ at arrival {mismatch + 1}",
        }
    results["failed"] = 0.0
    return results


def _summary(rows: list[Row], title: str) -> Table:
    table = Table(title=title, show_header=True, header_style="bold magenta")
    table.add_column("Metric", style="cyan")
    table.add_column("Mean", style="yellow")
    table.add_column("Max", style="green")
    keys = [k for k in rows[0] if k not in ("seed", "detail")] if rows else []
    for key in keys:
        values = [float(r[key]) for r in rows if key in r]
        table.add_row(key, f"{mean(values):.4f}", f"{max(values):.4f}")
    return table


def main() -> None:
    parser = argparse.ArgumentParser(description="rematch seed sweeps")
    parser.add_argument("kind", choices=("frt", "dynamic", "line"))
    parser.add_argument("--seeds", type=int, default=100)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--k", type=int, default=64, help="clients per line instance")
    args = parser.parse_args()

    console.print(f"\n🔍 [bold cyan]Sweep: {args.kind} over {args.seeds} seeds[/bold cyan]\n")
    seeds = range(args.seeds)
    with ProcessPoolExecutor(max_workers=args.workers) as pool:
        match args.kind:
            case "frt":
                rows = list(pool.map(frt_run, seeds))
            case "dynamic":
                rows = list(pool.map(dynamic_run, seeds))
            case _:
                rows = list(pool.map(line_run, [(s, args.k) for s in seeds]))

    failures = [r for r in rows if r.get("failed")]
    console.print(_summary([r for r in rows if not r.get("failed")], args.kind))

    if args.kind == "frt":
        bound = 8 * np.log(FRT_POINTS)
        observed = mean(float(r["mean_stretch"]) for r in rows)
        mark = "[green]✓[/green]" if observed <= bound else "[bold red]✗[/bold red]"
        console.print(f"  {mark} mean stretch {observed:.4f} vs 8·ln {FRT_POINTS} = {bound:.4f}")
        if observed > bound:
            failures.append({"seed": -1, "detail": f"mean stretch {observed:.4f} exceeds {bound:.4f}"})
        if not all(r["dominates"] for r in rows):
            failures.append({"seed": -1, "detail": "a sampled tree does not dominate"})

    if failures:
        for r in failures:
            console.print(f"  [bold red]✗[/bold red] seed {r['seed']}: {r.get('detail')}")
        sys.exit(1)
    console.print("\n[bold green]✓ All seeds passed[/bold green]")


if __name__ == "__main__":
    main()
