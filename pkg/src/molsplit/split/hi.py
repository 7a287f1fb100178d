"""
Hit Identification splitting.

Builds the neighborhood graph, coarsens it, cuts the coarse graph into k
mutually dissimilar subsets and rotates those subsets into folds. Any
train/test pair of a resulting fold is below the similarity threshold.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from molsplit.coarsen import coarse_graph
from molsplit.errors import InfeasibleError, InputError, MolsplitError
from molsplit.kcut import KCutProblem, default_bounds, get_solver, make_solution, verify_kcut
from molsplit.kcut.problem import DEFAULT_SLACK
from molsplit.molio.dataset import Dataset
from molsplit.simgraph import DEFAULT_THRESHOLD, build_neighborhood_graph
from molsplit.split.manifest import Fold, SplitKind, SplitManifest

logger = logging.getLogger(__name__)

DEFAULT_K = 3
DEFAULT_TIME_BUDGET = 60.0

_HINT = "Lower the partition bounds (or --slack), or raise --threshold so fewer molecules connect."


def make_folds(subsets: Sequence[Sequence[str]]) -> list[Fold]:
    """Fold i tests subset i and trains on the union of the others, in subset order."""
    if len(subsets) < 2:
        raise InputError(f"need at least 2 subsets to rotate, got {len(subsets)}")
    folds = []
    for i, test in enumerate(subsets):
        train = [rid for j, subset in enumerate(subsets) if j != i for rid in subset]
        folds.append(Fold(train=train, test=list(test)))
    return folds


def _fingerprint_params(ds: Dataset) -> dict:
    return {"format": ds.source_format, "nbits": ds.nbits, "radius": ds.radius}


def partition_dataset(
    ds: Dataset,
    threshold: float,
    k: int,
    bounds: Sequence[int],
    time_budget: float | None = DEFAULT_TIME_BUDGET,
    threads: int = 1,
    solver: str = "bnb",
    node_limit: int | None = None,
) -> tuple[list[list[str]], list[str], dict]:
    """Cut ``ds`` into k dissimilar subsets, heaviest first; returns (subsets, removed, stats).

    The coarse graph is solved first. A Butina cluster is never split, so
    when no coarse assignment meets the bounds the molecule-level graph is
    solved instead before the split is declared infeasible.
    """
    if len(ds) == 0:
        raise InputError("dataset is empty")
    graph = build_neighborhood_graph(ds, threshold, threads=threads)
    coarse = coarse_graph(graph, threshold)
    molecule_problem = KCutProblem.from_edges(
        [1] * graph.n, [(u, v) for u, v, _ in graph.edges()], k, tuple(bounds), time_budget, node_limit
    )
    engine = get_solver(solver)
    coarsened = coarse.m < graph.n
    try:
        problem = KCutProblem(coarse.to_networkx(), k, tuple(bounds), time_budget, node_limit=node_limit)
        solution = engine.solve(problem)
        assignment = coarse.expand(solution.assignment)
    except InfeasibleError as exc:
        if not coarsened:
            raise _infeasible(len(ds), k, bounds, threshold, exc) from exc
        logger.info(
            "Coarse graph of %d clusters is infeasible (%s); solving %d molecules directly", coarse.m, exc, graph.n
        )
        try:
            solution = engine.solve(molecule_problem)
        except InfeasibleError as fine_exc:
            raise _infeasible(len(ds), k, bounds, threshold, fine_exc) from fine_exc
        assignment = np.asarray(solution.assignment, dtype=np.int64)
        coarsened = False

    report = verify_kcut(molecule_problem, make_solution(molecule_problem, assignment, solution.optimal))
    if not report.ok:
        raise MolsplitError(
            "expanded assignment failed molecule-level verification: "
            + "; ".join(v.message for v in report.violations)
        )

    sizes = np.bincount(assignment, minlength=k + 1)[1:]
    order = sorted(range(1, k + 1), key=lambda p: (-int(sizes[p - 1]), p))
    ids = ds.ids
    subsets = [[ids[i] for i in np.flatnonzero(assignment == p)] for p in order]
    removed = [ids[i] for i in np.flatnonzero(assignment == 0)]
    stats = {
        "coarse_clusters": coarse.m,
        "coarsened": coarsened,
        "edges": graph.n_edges,
        "kept": int(solution.kept_weight),
        "optimal": bool(solution.optimal),
        "gap": int(solution.gap),
        "node_limit": node_limit,
        "reproducible": not solution.timed_out,
    }
    logger.info(
        "Hi partition: subsets %s, removed %d (%s)",
        [len(s) for s in subsets], len(removed), "optimal" if solution.optimal else f"gap {solution.gap}",
    )
    return subsets, removed, stats


def _infeasible(n: int, k: int, bounds: Sequence[int], threshold: float, exc: Exception) -> InfeasibleError:
    return InfeasibleError(
        f"cannot split {n} molecules into {k} parts with bounds {list(bounds)} at threshold {threshold}: {exc}",
        hint=_HINT,
    )


def hi_split(
    ds: Dataset,
    threshold: float = DEFAULT_THRESHOLD,
    k: int = DEFAULT_K,
    bounds: Sequence[int] | None = None,
    slack: float = DEFAULT_SLACK,
    time_budget: float | None = DEFAULT_TIME_BUDGET,
    threads: int = 1,
    seed: int | None = None,
    solver: str = "bnb",
    node_limit: int | None = None,
) -> SplitManifest:
    """k mutually dissimilar subsets rotated into k folds.

    Bounds default to equal shares, floor(n / k * slack). The split is
    deterministic unless the time budget stops the search first; the
    manifest then records ``reproducible: false``. ``node_limit`` bounds the
    search without that caveat. ``seed`` is only recorded.
    """
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    bounds = tuple(bounds) if bounds is not None else default_bounds(len(ds), [1.0 / k] * k, slack)
    subsets, removed, stats = partition_dataset(ds, threshold, k, bounds, time_budget, threads, solver, node_limit)
    return SplitManifest(
        kind=SplitKind.HI,
        folds=make_folds(subsets),
        removed=removed,
        parameters={
            "threshold": threshold,
            "k": k,
            "bounds": list(bounds),
            "slack": slack,
            "time_budget": time_budget,
            "seed": seed,
            "solver": solver,
            "fingerprint": _fingerprint_params(ds),
            "subset_sizes": [len(s) for s in subsets],
            **stats,
        },
    )


def hi_train_test_split(
    ds: Dataset,
    threshold: float = DEFAULT_THRESHOLD,
    train_fraction: float = 0.9,
    slack: float = DEFAULT_SLACK,
    time_budget: float | None = DEFAULT_TIME_BUDGET,
    threads: int = 1,
    seed: int | None = None,
    solver: str = "bnb",
    node_limit: int | None = None,
) -> SplitManifest:
    """Single (train, test) fold: the heavier subset trains, the lighter tests."""
    if not 0 < train_fraction < 1:
        raise InputError(f"train fraction must be in (0, 1), got {train_fraction}")
    bounds = default_bounds(len(ds), [train_fraction, 1 - train_fraction], slack)
    subsets, removed, stats = partition_dataset(ds, threshold, 2, bounds, time_budget, threads, solver, node_limit)
    return SplitManifest(
        kind=SplitKind.HI,
        folds=[Fold(train=subsets[0], test=subsets[1])],
        removed=removed,
        parameters={
            "threshold": threshold,
            "k": 2,
            "train_fraction": train_fraction,
            "bounds": list(bounds),
            "slack": slack,
            "time_budget": time_budget,
            "seed": seed,
            "solver": solver,
            "fingerprint": _fingerprint_params(ds),
            "subset_sizes": [len(s) for s in subsets],
            **stats,
        },
    )
