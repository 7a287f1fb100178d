"""CLI commands: molsplit audit / metrics / circles / compare: evaluating splits."""

from __future__ import annotations

from pathlib import Path

import click

from molsplit.audit import audit_datasets, circle_representatives, compare_splitters, write_audit
from molsplit.cli.config import RunConfig, dataset_options, dump_json, get_threads, threads_option
from molsplit.formatter import format_audit, format_comparison, format_metrics
from molsplit.metrics import MetricMode, evaluate, load_predictions
from molsplit.molio.dataset import DEFAULT_NBITS, DEFAULT_RADIUS, FORMATS, load_dataset
from molsplit.split.hi import DEFAULT_TIME_BUDGET

output_option = click.option(
    "--output", "-o",
    type=click.Choice(["json", "text"]),
    default="json",
    show_default=True,
    help="Output format.",
)


def _emit(payload: dict, text: str, output: str, out_path: str | None = None) -> None:
    body = dump_json(payload)
    if out_path:
        Path(out_path).write_text(body, encoding="utf-8")
    click.echo(body if output == "json" else text, nl=output != "json")


@click.command("audit")
@click.option("--train", "train_path", required=True, type=click.Path(), help="Train dataset CSV.")
@click.option("--test", "test_path", required=True, type=click.Path(), help="Test dataset CSV.")
@click.option("--threshold", default=0.4, show_default=True, help="Leakage similarity threshold.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default=None, help="Dataset format of both files.")
@click.option("--radius", default=DEFAULT_RADIUS, show_default=True, help="Fingerprint radius for smiles-csv input.")
@click.option("--nbits", default=DEFAULT_NBITS, show_default=True, help="Fingerprint width for smiles-csv input.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None, help="Write report.json and histogram.csv here.")
@output_option
def audit_cmd(train_path, test_path, threshold, fmt, radius, nbits, out_dir, output) -> None:
    """Report how many test molecules have a train neighbour at or above the threshold.

    \b
    Examples:
        molsplit audit --train hi/train_1.csv --test hi/test_1.csv
        molsplit audit --train t.csv --test s.csv --out audit/ -o text
    """
    train = load_dataset(train_path, format=fmt, radius=radius, nbits=nbits)
    test = load_dataset(test_path, format=fmt, radius=radius, nbits=nbits)
    report = audit_datasets(train, test, threshold)
    config = RunConfig(
        subcommand="audit",
        inputs={"train": train_path, "test": test_path},
        output=out_dir,
        threshold=threshold,
        radius=radius,
        nbits=nbits,
    )
    if out_dir:
        write_audit(report, out_dir, config.to_dict())
    payload = {**report.to_dict(include_nearest=False), "config": config.to_dict()}
    _emit(payload, format_audit(report), output)


@click.command("metrics")
@click.option("--predictions", "pred_path", required=True, type=click.Path(), help="Prediction CSV (id,truth,score[,cluster]).")
@click.option(
    "--mode", "-m",
    type=click.Choice([m.value for m in MetricMode]),
    required=True,
    help="hi: PR AUC; lo: mean per-cluster Spearman.",
)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Write the JSON result here.")
@output_option
def metrics_cmd(pred_path, mode, out_path, output) -> None:
    """Score predictions on a split's test set, with the dummy baseline alongside."""
    table = load_predictions(pred_path)
    result = evaluate(table, mode)
    config = RunConfig(subcommand="metrics", inputs={"predictions": pred_path}, output=out_path, mode=mode)
    _emit({**result.to_dict(), "config": config.to_dict()}, format_metrics(result), output, out_path)


@click.command("circles")
@dataset_options
@click.option("--threshold", default=0.5, show_default=True, help="Circle radius in Tanimoto similarity.")
@output_option
def circles_cmd(in_path, fmt, radius, nbits, threshold, output) -> None:
    """Count mutually dissimilar molecules (#Circles, greedy packing in file order)."""
    ds = load_dataset(in_path, format=fmt, radius=radius, nbits=nbits)
    reps = circle_representatives(ds.fingerprint_matrix, threshold)
    ids = ds.ids
    config = RunConfig(subcommand="circles", inputs={"dataset": in_path}, threshold=threshold, radius=radius, nbits=nbits)
    payload = {
        "n_circles": len(reps),
        "n_molecules": len(ds),
        "threshold": threshold,
        "representatives": [ids[i] for i in reps],
        "config": config.to_dict(),
    }
    _emit(payload, f"#Circles({threshold}) = {len(reps)} of {len(ds)} molecules", output)


@click.command("compare")
@dataset_options
@click.option("--threshold", default=0.4, show_default=True, help="Similarity threshold for both splitters.")
@click.option("--train-fraction", default=0.9, show_default=True, help="Target train share.")
@click.option("--slack", default=0.9, show_default=True, help="Slack factor for the Hi splitter's bounds.")
@click.option("--time-budget", default=DEFAULT_TIME_BUDGET, show_default=True, help="Hi solver wall-clock limit in seconds.")
@click.option("--seed", default=0, show_default=True, help="Seed of the greedy baseline's random partition.")
@threads_option
@output_option
def compare_cmd(in_path, fmt, radius, nbits, threshold, train_fraction, slack, time_budget, seed, threads, output) -> None:
    """Compare removals of the greedy baseline and the Hi splitter at one ratio."""
    threads = get_threads(threads)
    ds = load_dataset(in_path, format=fmt, radius=radius, nbits=nbits)
    report = compare_splitters(
        ds, threshold, train_fraction, seed=seed, time_budget=time_budget, slack=slack, threads=threads
    )
    config = RunConfig(
        subcommand="compare",
        inputs={"dataset": in_path},
        threshold=threshold,
        fractions=(train_fraction, 1 - train_fraction),
        seed=seed,
        radius=radius,
        nbits=nbits,
        time_budget=time_budget,
        extra={"slack": slack},
    )
    _emit({**report.to_dict(), "config": config.to_dict()}, format_comparison(report), output)
