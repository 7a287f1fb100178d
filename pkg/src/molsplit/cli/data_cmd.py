"""CLI commands: molsplit fingerprint / preprocess: dataset preparation."""

from __future__ import annotations

import click

from molsplit.molio.activity import ActivityMode, load_activity_csv, preprocess_activity
from molsplit.molio.dataset import DEFAULT_NBITS, DEFAULT_RADIUS, FINGERPRINT_CSV, SMILES_CSV, load_dataset, write_dataset


@click.command("fingerprint")
@click.option("--in", "in_path", required=True, type=click.Path(), help="smiles-csv dataset.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="fingerprint-csv to write.")
@click.option("--radius", default=DEFAULT_RADIUS, show_default=True, help="Circular environment radius.")
@click.option("--nbits", default=DEFAULT_NBITS, show_default=True, help="Fingerprint width (power of two >= 64).")
def fingerprint_cmd(in_path: str, out_path: str, radius: int, nbits: int) -> None:
    """Compute Morgan-style fingerprints and write a fingerprint-csv.

    \b
    Examples:
        molsplit fingerprint --in ds.csv --out ds_fp.csv
        molsplit fingerprint --in ds.csv --out ds_fp.csv --radius 3 --nbits 2048
    """
    ds = load_dataset(in_path, format=SMILES_CSV, radius=radius, nbits=nbits)
    write_dataset(ds, out_path, format=FINGERPRINT_CSV)
    click.echo(f"Wrote {len(ds)} fingerprints ({nbits} bits, radius {radius}) to {out_path}")


@click.command("preprocess")
@click.option("--in", "in_path", required=True, type=click.Path(), help="Raw activity CSV (smiles,value[,relation]).")
@click.option("--out", "out_path", required=True, type=click.Path(), help="smiles-csv dataset to write.")
@click.option(
    "--mode", "-m",
    type=click.Choice([m.value for m in ActivityMode]),
    default=ActivityMode.BINARY.value,
    show_default=True,
    help="Binary labels (pX > 6) or continuous values (5 < pX < 9).",
)
@click.option("--active-threshold", default=6.0, show_default=True, help="pX above which a molecule is active.")
@click.option("--ambiguous-cutoff", default=10_000.0, show_default=True, help="Censored-value cutoff in nM (binary mode).")
@click.option("--radius", default=DEFAULT_RADIUS, show_default=True, help="Fingerprint radius.")
@click.option("--nbits", default=DEFAULT_NBITS, show_default=True, help="Fingerprint width.")
def preprocess_cmd(
    in_path: str,
    out_path: str,
    mode: str,
    active_threshold: float,
    ambiguous_cutoff: float,
    radius: int,
    nbits: int,
) -> None:
    """Convert raw nM activities to a pChEMBL-scale dataset keyed by SMILES."""
    rows = load_activity_csv(in_path)
    ds = preprocess_activity(
        rows,
        mode=mode,
        active_threshold=active_threshold,
        ambiguous_cutoff_nm=ambiguous_cutoff,
        radius=radius,
        nbits=nbits,
    )
    write_dataset(ds, out_path)
    click.echo(f"Kept {len(ds)} of {len(rows)} rows as unique molecules ({mode}); wrote {out_path}")
