"""Exhaustive k-cut oracle for small instances."""

from __future__ import annotations

import numpy as np

from molsplit.errors import InfeasibleError, InputError
from molsplit.kcut.problem import KCutProblem, KCutSolution, make_solution

DEFAULT_CAP = 10_000_000
_CHUNK = 1 << 16


def brute_force_kcut(problem: KCutProblem, cap: int = DEFAULT_CAP) -> KCutSolution:
    """Enumerate all (k+1)^n assignments; the first maximum in enumeration order wins.

    Enumeration is mixed-radix with vertex 0 as the fastest-changing digit.
    """
    n, k = problem.n, problem.k
    base = k + 1
    total = base ** n
    if total > cap:
        raise InputError(f"brute force needs {base}^{n} = {total} assignments, cap is {cap}")

    weights = problem.weights
    bounds = np.asarray(problem.bounds, dtype=np.int64)
    edges = np.asarray(problem.edge_list(), dtype=np.int64).reshape(-1, 2)
    place = base ** np.arange(n, dtype=np.int64)

    best_kept, best_assignment = -1, None
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        assign = (idx[:, None] // place[None, :]) % base

        ok = np.ones(len(idx), dtype=bool)
        for p in range(1, k + 1):
            ok &= (assign == p).astype(np.int64) @ weights >= bounds[p - 1]
        if len(edges):
            a, b = assign[:, edges[:, 0]], assign[:, edges[:, 1]]
            ok &= ~((a > 0) & (b > 0) & (a != b)).any(axis=1)
        if not ok.any():
            continue

        kept = np.where(ok, (assign > 0).astype(np.int64) @ weights, -1)
        i = int(np.argmax(kept))
        if kept[i] > best_kept:
            best_kept, best_assignment = int(kept[i]), assign[i]

    if best_assignment is None:
        raise InfeasibleError(f"no assignment of {n} vertices meets bounds {list(problem.bounds)}")
    return make_solution(problem, best_assignment.tolist(), optimal=True, nodes=total)
