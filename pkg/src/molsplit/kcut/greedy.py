"""Component-packing heuristic for the balanced k-cut; seeds branch and bound."""

from __future__ import annotations

import logging

import networkx as nx

from molsplit.errors import InfeasibleError
from molsplit.kcut.problem import KCutProblem, KCutSolution, make_solution

logger = logging.getLogger(__name__)


def _pack(graph: nx.Graph, weight: dict[int, int], removed: set[int], k: int, bounds):
    """Assign kept components, heaviest first, to the partition furthest below its bound."""
    kept = graph.subgraph(v for v in graph if v not in removed)
    components = sorted(
        (sorted(c) for c in nx.connected_components(kept)),
        key=lambda c: (-sum(weight[v] for v in c), c[0]),
    )
    part_weight = [0] * k
    assignment = {v: 0 for v in graph}
    for comp in components:
        p = max(range(k), key=lambda i: (bounds[i] - part_weight[i], -i))
        part_weight[p] += sum(weight[v] for v in comp)
        for v in comp:
            assignment[v] = p + 1
    return assignment, part_weight, components


def _repair(graph: nx.Graph, weight: dict[int, int], assignment: dict[int, int], part_weight, bounds) -> int:
    """Re-add removed vertices whose kept neighbours all sit in one partition."""
    restored = 0
    changed = True
    while changed:
        changed = False
        for v in sorted((v for v, a in assignment.items() if a == 0), key=lambda v: (-weight[v], v)):
            parts = {assignment[u] for u in graph.neighbors(v)} - {0}
            if len(parts) > 1:
                continue
            if parts:
                p = parts.pop()
            else:
                p = 1 + max(range(len(part_weight)), key=lambda i: (bounds[i] - part_weight[i], -i))
            assignment[v] = p
            part_weight[p - 1] += weight[v]
            restored += 1
            changed = True
    return restored


def greedy_kcut(problem: KCutProblem) -> KCutSolution:
    """Pack whole components; while bounds fail, fracture the heaviest component.

    Fracturing removes the highest-degree vertex of the heaviest component
    that has more than one vertex (ties: lighter vertex, then lower index).
    Raises InfeasibleError when only singleton components remain and the
    bounds are still unmet.
    """
    graph, k, bounds = problem.graph, problem.k, problem.bounds
    weight = {v: int(w) for v, w in graph.nodes(data="weight")}
    if sum(bounds) > problem.total_weight:
        raise InfeasibleError(
            f"bounds sum to {sum(bounds)} but total vertex weight is {problem.total_weight}"
        )

    removed: set[int] = set()
    while True:
        assignment, part_weight, components = _pack(graph, weight, removed, k, bounds)
        if all(w >= b for w, b in zip(part_weight, bounds)):
            break
        if not components:
            raise InfeasibleError("greedy packing removed every vertex without meeting the bounds")
        splittable = [c for c in components if len(c) > 1]
        if not splittable:
            raise InfeasibleError(
                f"greedy packing cannot meet bounds {list(bounds)} "
                f"(partition weights {part_weight}, only singleton components left)"
            )
        largest = splittable[0]
        sub = graph.subgraph(largest)
        victim = min(largest, key=lambda v: (-sub.degree(v), weight[v], v))
        removed.add(victim)

    restored = _repair(graph, weight, assignment, part_weight, bounds)
    solution = make_solution(problem, [assignment[v] for v in range(problem.n)], optimal=False)
    if solution.kept_weight == problem.total_weight:
        solution = make_solution(problem, solution.assignment, optimal=True)
    logger.debug(
        "Greedy k-cut: removed %d vertices (%d restored), kept weight %d/%d",
        len(removed) - restored, restored, solution.kept_weight, problem.total_weight,
    )
    return solution
