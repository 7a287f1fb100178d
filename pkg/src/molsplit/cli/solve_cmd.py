"""CLI command: molsplit kcut-solve: solve a k-cut problem JSON offline."""

from __future__ import annotations

from pathlib import Path

import click

from molsplit.cli.config import RunConfig, dump_json
from molsplit.formatter import format_kcut
from molsplit.kcut import SOLVERS, get_solver, load_problem, solution_to_dict, verify_kcut


@click.command("kcut-solve")
@click.option("--problem", "problem_path", required=True, type=click.Path(), help="Problem JSON.")
@click.option("--solver", type=click.Choice(list(SOLVERS)), default="bnb", show_default=True, help="k-cut engine.")
@click.option("--time-budget", type=float, default=None, help="Override the problem's time budget (seconds).")
@click.option("--node-limit", type=click.IntRange(min=1), default=None, help="Override the problem's search node limit.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Write the solution JSON here.")
@click.option(
    "--output", "-o",
    type=click.Choice(["json", "text"]),
    default="json",
    show_default=True,
    help="Stdout format.",
)
def kcut_solve_cmd(
    problem_path: str,
    solver: str,
    time_budget: float | None,
    node_limit: int | None,
    out_path: str | None,
    output: str,
) -> None:
    """Solve a balanced vertex minimum k-cut problem.

    \b
    Problem JSON:
        {"vertices": [{"id": 0, "weight": 1}, ...], "edges": [[0, 1], ...],
         "k": 2, "bounds": [1, 1], "time_budget": null, "node_limit": null}
    """
    problem = load_problem(problem_path, time_budget=time_budget, node_limit=node_limit)
    solution = get_solver(solver).solve(problem)
    report = verify_kcut(problem, solution)
    config = RunConfig(
        subcommand="kcut-solve",
        inputs={"problem": problem_path},
        output=out_path,
        k=problem.k,
        bounds=problem.bounds,
        time_budget=problem.time_budget,
        extra={"solver": solver, "node_limit": problem.node_limit},
    )
    payload = {
        **solution_to_dict(problem, solution),
        "verification": report.to_dict(),
        "config": config.to_dict(),
    }
    text = dump_json(payload)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    if output == "json":
        click.echo(text, nl=False)
    else:
        click.echo(format_kcut(problem, solution, report))
