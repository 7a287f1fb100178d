"""molsplit CLI - leakage-controlled dataset splitting."""

from __future__ import annotations

import logging
import sys

import click

from molsplit import FORMAT_VERSION, __version__
from molsplit.errors import InfeasibleError, MolsplitError, TimeBudgetError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_TIME_BUDGET = 3

_LOG_LEVELS = {0: logging.WARNING, 1: logging.INFO}


@click.group()
@click.version_option(
    __version__, prog_name="molsplit", message=f"%(prog)s %(version)s (format {FORMAT_VERSION})"
)
@click.option("--verbose", "-v", count=True, help="Log progress to stderr (-v info, -vv debug).")
def cli(verbose):
    """molsplit - leakage-controlled train/test splits for molecular datasets."""
    logging.basicConfig(
        level=_LOG_LEVELS.get(verbose, logging.DEBUG),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _fail(exc: BaseException, code: int) -> int:
    click.secho(f"Error: {exc}", fg="red", err=True)
    return code


def run(argv: list[str] | None = None) -> int:
    """Run the CLI and map failures to exit codes: 1 input, 2 infeasible, 3 time budget."""
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        result = cli.main(args=argv, prog_name="molsplit", standalone_mode=False)
    except InfeasibleError as exc:
        return _fail(exc, EXIT_INFEASIBLE)
    except TimeBudgetError as exc:
        return _fail(exc, EXIT_TIME_BUDGET)
    except MolsplitError as exc:
        return _fail(exc, EXIT_INPUT)
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except click.Abort:
        click.secho("Aborted.", fg="red", err=True)
        return EXIT_INPUT
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        return _fail(exc, EXIT_INPUT)
    return result if isinstance(result, int) else EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


from molsplit.cli.data_cmd import fingerprint_cmd, preprocess_cmd
from molsplit.cli.eval_cmd import audit_cmd, circles_cmd, compare_cmd, metrics_cmd
from molsplit.cli.solve_cmd import kcut_solve_cmd
from molsplit.cli.split_cmd import greedy_split_cmd, hi_split_cmd, lo_split_cmd

cli.add_command(fingerprint_cmd)
cli.add_command(preprocess_cmd)
cli.add_command(hi_split_cmd)
cli.add_command(lo_split_cmd)
cli.add_command(greedy_split_cmd)
cli.add_command(kcut_solve_cmd)
cli.add_command(audit_cmd)
cli.add_command(metrics_cmd)
cli.add_command(circles_cmd)
cli.add_command(compare_cmd)
