"""Resolved run configuration and option helpers shared by the subcommands."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field

import click

from molsplit.molio.dataset import DEFAULT_NBITS, DEFAULT_RADIUS, FORMATS

THREADS_ENV = "MOLSPLIT_THREADS"


@dataclass(frozen=True)
class RunConfig:
    """Flags of one invocation, embedded under ``config`` in everything it writes.

    Thread count is left out: it never changes results.
    """
    subcommand: str
    inputs: dict[str, str] = field(default_factory=dict)
    output: str | None = None
    threshold: float | None = None
    k: int | None = None
    bounds: tuple[int, ...] | None = None
    fractions: tuple[float, ...] | None = None
    seed: int | None = None
    radius: int | None = None
    nbits: int | None = None
    mode: str | None = None
    time_budget: float | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        data = asdict(self)
        for key in ("bounds", "fractions"):
            if data[key] is not None:
                data[key] = list(data[key])
        return data


def get_threads(threads: int | None) -> int:
    """Resolve --threads from option or environment (default 1)."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "").strip()
        if not raw:
            return 1
        try:
            threads = int(raw)
        except ValueError:
            raise click.ClickException(f"{THREADS_ENV} must be an integer, got '{raw}'.") from None
    if threads < 1:
        raise click.ClickException(f"--threads must be >= 1, got {threads}.")
    return threads


def parse_int_list(value: str | None, name: str) -> tuple[int, ...] | None:
    if value is None:
        return None
    try:
        return tuple(int(part) for part in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{value}'", param_hint=name) from None


def dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def dataset_options(func):
    """--in / --format / --radius / --nbits for commands that read a dataset."""
    func = click.option("--nbits", default=DEFAULT_NBITS, show_default=True, help="Fingerprint width for smiles-csv input.")(func)
    func = click.option("--radius", default=DEFAULT_RADIUS, show_default=True, help="Fingerprint radius for smiles-csv input.")(func)
    func = click.option(
        "--format", "fmt",
        type=click.Choice(FORMATS),
        default=None,
        help="Dataset format (detected from the header when omitted).",
    )(func)
    func = click.option("--in", "in_path", required=True, type=click.Path(), help="Input dataset CSV.")(func)
    return func


def threads_option(func):
    return click.option(
        "--threads", type=int, default=None,
        help=f"Worker threads for similarity computation (or set {THREADS_ENV}; default 1).",
    )(func)
