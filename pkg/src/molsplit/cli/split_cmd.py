"""CLI commands: molsplit hi-split / lo-split / greedy-split."""

from __future__ import annotations

import click

from molsplit.cli.config import RunConfig, dataset_options, get_threads, parse_int_list, threads_option
from molsplit.formatter import format_split_summary
from molsplit.kcut import SOLVERS
from molsplit.kcut.problem import DEFAULT_SLACK
from molsplit.molio.dataset import load_dataset
from molsplit.simgraph import build_neighborhood_graph, export_edge_list
from molsplit.split import (
    STD_THRESHOLDS,
    get_lo_folds,
    get_lo_split,
    greedy_split,
    hi_split,
    hi_train_test_split,
    write_split,
)
from molsplit.split.hi import DEFAULT_K, DEFAULT_TIME_BUDGET


def _finish(manifest, ds, out_dir: str, config: RunConfig) -> None:
    manifest.config = config.to_dict()
    write_split(manifest, ds, out_dir)
    click.echo(format_split_summary(manifest))
    click.echo(f"Wrote {manifest.k} fold(s) and manifest.json to {out_dir}")


@click.command("hi-split")
@dataset_options
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--k", "k", default=DEFAULT_K, show_default=True, help="Number of dissimilar subsets / folds.")
@click.option("--threshold", default=0.4, show_default=True, help="Similarity at or above which molecules connect.")
@click.option("--bounds", default=None, help="Comma-separated minimum subset sizes (default floor(n/k*slack)).")
@click.option("--slack", default=DEFAULT_SLACK, show_default=True, help="Slack factor for default bounds.")
@click.option(
    "--train-fraction", type=float, default=None,
    help="Make a single train/test fold at this ratio instead of k rotated folds.",
)
@click.option("--time-budget", default=DEFAULT_TIME_BUDGET, show_default=True, help="Solver wall-clock limit in seconds.")
@click.option(
    "--node-limit", type=click.IntRange(min=1), default=None,
    help="Stop the search after this many nodes; unlike --time-budget the result repeats exactly.",
)
@click.option("--solver", type=click.Choice(list(SOLVERS)), default="bnb", show_default=True, help="k-cut engine.")
@click.option("--seed", default=0, show_default=True, help="Recorded for provenance; the split is deterministic.")
@click.option(
    "--edges", "edges_path", type=click.Path(dir_okay=False), default=None,
    help="Also write the similarity graph as a u,v,similarity CSV.",
)
@threads_option
def hi_split_cmd(
    in_path, fmt, radius, nbits, out_dir, k, threshold, bounds, slack,
    train_fraction, time_budget, node_limit, solver, seed, edges_path, threads,
) -> None:
    """Split so no test molecule is similar to any train molecule.

    \b
    Examples:
        molsplit hi-split --in ds.csv --k 3 --threshold 0.4 --out hi/
        molsplit hi-split --in ds.csv --train-fraction 0.9 --out hi_90/
    """
    threads = get_threads(threads)
    bound_list = parse_int_list(bounds, "--bounds")
    ds = load_dataset(in_path, format=fmt, radius=radius, nbits=nbits)
    if train_fraction is not None:
        if bound_list is not None:
            raise click.UsageError("--bounds cannot be combined with --train-fraction.")
        manifest = hi_train_test_split(
            ds, threshold, train_fraction, slack=slack, time_budget=time_budget,
            threads=threads, seed=seed, solver=solver, node_limit=node_limit,
        )
        fractions = (train_fraction, 1 - train_fraction)
        k = 2
    else:
        manifest = hi_split(
            ds, threshold, k, bounds=bound_list, slack=slack, time_budget=time_budget,
            threads=threads, seed=seed, solver=solver, node_limit=node_limit,
        )
        fractions = None
    config = RunConfig(
        subcommand="hi-split",
        inputs={"dataset": in_path},
        output=out_dir,
        threshold=threshold,
        k=k,
        bounds=tuple(manifest.parameters["bounds"]),
        fractions=fractions,
        seed=seed,
        radius=radius,
        nbits=nbits,
        time_budget=time_budget,
        extra={"slack": slack, "solver": solver, "node_limit": node_limit},
    )
    _finish(manifest, ds, out_dir, config)
    if edges_path:
        export_edge_list(build_neighborhood_graph(ds, threshold, threads=threads), edges_path)
        click.echo(f"Wrote similarity edges to {edges_path}")
    if not manifest.parameters["reproducible"]:
        click.secho(
            "Warning: the time budget stopped the search; rerunning may give a different split. "
            "Use --node-limit for a repeatable bounded search.",
            err=True, fg="yellow",
        )


@click.command("lo-split")
@dataset_options
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--threshold", default=0.4, show_default=True, help="Similarity to the center for cluster membership.")
@click.option("--min-size", default=5, show_default=True, help="A center needs more than this many molecules in its neighborhood.")
@click.option("--max-clusters", type=int, default=None, help="Stop after this many clusters (default: no limit).")
@click.option(
    "--assay", type=click.Choice(sorted(STD_THRESHOLDS)), default="pki", show_default=True,
    help="Activity type; selects the default value-spread threshold.",
)
@click.option("--std-threshold", type=float, default=None, help="Override the value-spread threshold.")
@click.option("--folds", type=click.IntRange(min=1), default=1, show_default=True, help="Folds, one seed each.")
@click.option("--seed", type=int, default=None, help="Tie-break seed (index order when omitted; base seed for --folds).")
@threads_option
def lo_split_cmd(
    in_path, fmt, radius, nbits, out_dir, threshold, min_size, max_clusters,
    assay, std_threshold, folds, seed, threads,
) -> None:
    """Extract similar-molecule test clusters, keeping one anchor each in train.

    \b
    Examples:
        molsplit lo-split --in ds.csv --out lo/ --assay pic50
        molsplit lo-split --in ds.csv --out lo/ --folds 3 --seed 0
    """
    threads = get_threads(threads)
    std_t = std_threshold if std_threshold is not None else STD_THRESHOLDS[assay]
    ds = load_dataset(in_path, format=fmt, radius=radius, nbits=nbits)
    if folds == 1:
        manifest = get_lo_split(ds, threshold, min_size, max_clusters, std_t, seed=seed, threads=threads)
    else:
        base = seed or 0
        manifest = get_lo_folds(
            ds, threshold, min_size, max_clusters, std_t,
            seeds=tuple(base + i for i in range(folds)), threads=threads,
        )
    config = RunConfig(
        subcommand="lo-split",
        inputs={"dataset": in_path},
        output=out_dir,
        threshold=threshold,
        seed=seed,
        radius=radius,
        nbits=nbits,
        mode=assay,
        extra={
            "min_size": min_size,
            "max_clusters": max_clusters,
            "std_threshold": std_t,
            "folds": folds,
        },
    )
    _finish(manifest, ds, out_dir, config)


@click.command("greedy-split")
@dataset_options
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--threshold", default=0.4, show_default=True, help="Test molecules at or above this similarity to train are removed.")
@click.option("--test-fraction", default=0.1, show_default=True, help="Share of molecules initially placed in test.")
@click.option("--seed", default=0, show_default=True, help="Seed of the random initial partition.")
def greedy_split_cmd(in_path, fmt, radius, nbits, out_dir, threshold, test_fraction, seed) -> None:
    """Random split, then discard test molecules too similar to train (baseline)."""
    ds = load_dataset(in_path, format=fmt, radius=radius, nbits=nbits)
    manifest = greedy_split(ds, threshold, test_fraction, seed)
    config = RunConfig(
        subcommand="greedy-split",
        inputs={"dataset": in_path},
        output=out_dir,
        threshold=threshold,
        fractions=(1 - test_fraction, test_fraction),
        seed=seed,
        radius=radius,
        nbits=nbits,
    )
    _finish(manifest, ds, out_dir, config)
