"""Balanced vertex minimum k-cut problem and solution types, plus their JSON codecs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from molsplit.errors import InputError

DEFAULT_SLACK = 0.9


@dataclass(frozen=True, eq=False)
class KCutProblem:
    """Vertex-weighted graph on vertices 0..n-1 to be cut into k bounded partitions.

    Each node carries an integer ``weight`` attribute (>= 1). ``bounds[i]`` is
    the minimum total weight of partition i + 1; partition 0 is the removed set.
    ``node_limit`` caps the search by expanded nodes, which unlike
    ``time_budget`` stops at the same point on every run.
    """
    graph: nx.Graph
    k: int
    bounds: tuple[int, ...]
    time_budget: float | None = None
    labels: tuple = field(default=(), repr=False)
    node_limit: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "bounds", tuple(int(b) for b in self.bounds))
        if self.k < 2:
            raise InputError(f"k must be >= 2, got {self.k}")
        if len(self.bounds) != self.k:
            raise InputError(f"expected {self.k} bounds, got {len(self.bounds)}")
        if any(b < 0 for b in self.bounds):
            raise InputError(f"bounds must be non-negative, got {list(self.bounds)}")
        n = self.graph.number_of_nodes()
        if sorted(self.graph.nodes) != list(range(n)):
            raise InputError("graph vertices must be labelled 0..n-1")
        for v, w in self.graph.nodes(data="weight"):
            if w is None or int(w) != w or w < 1:
                raise InputError(f"vertex {v} weight must be a positive integer, got {w}")
        if nx.number_of_selfloops(self.graph):
            raise InputError("graph has self-loops")
        if self.time_budget is not None and self.time_budget <= 0:
            raise InputError(f"time budget must be positive, got {self.time_budget}")
        if self.node_limit is not None and (int(self.node_limit) != self.node_limit or self.node_limit < 1):
            raise InputError(f"node limit must be a positive integer, got {self.node_limit}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(n)))

    @classmethod
    def from_edges(
        cls,
        weights: Sequence[int],
        edges: Iterable[tuple[int, int]],
        k: int,
        bounds: Sequence[int],
        time_budget: float | None = None,
        node_limit: int | None = None,
    ) -> "KCutProblem":
        graph = nx.Graph()
        graph.add_nodes_from((v, {"weight": int(w)}) for v, w in enumerate(weights))
        for u, v in edges:
            if u not in graph or v not in graph:
                raise InputError(f"edge ({u}, {v}) references a missing vertex")
            graph.add_edge(u, v)
        return cls(graph, k, tuple(bounds), time_budget, node_limit=node_limit)

    @property
    def n(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def weights(self) -> np.ndarray:
        return np.array([self.graph.nodes[v]["weight"] for v in range(self.n)], dtype=np.int64)

    @property
    def total_weight(self) -> int:
        return int(self.weights.sum())

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted((min(u, v), max(u, v)) for u, v in self.graph.edges)

    def adjacency(self) -> list[list[int]]:
        return [sorted(self.graph.neighbors(v)) for v in range(self.n)]


@dataclass(frozen=True)
class KCutSolution:
    """Per-vertex assignment: 0 = removed, 1..k = partition."""
    assignment: tuple[int, ...]
    kept_weight: int
    optimal: bool
    gap: int = 0
    nodes: int = 0  # search nodes expanded, when the solver counts them
    timed_out: bool = False  # stopped by the wall clock, so not reproducible

    def partition_weights(self, problem: KCutProblem) -> list[int]:
        weights = problem.weights
        assignment = np.asarray(self.assignment, dtype=np.int64)
        return [int(weights[assignment == p].sum()) for p in range(1, problem.k + 1)]

    @property
    def removed(self) -> list[int]:
        return [v for v, a in enumerate(self.assignment) if a == 0]


def default_bounds(n: int, fractions: Sequence[float], slack: float = DEFAULT_SLACK) -> tuple[int, ...]:
    """b_i = floor(f_i * n * slack)."""
    if not 0 < slack <= 1:
        raise InputError(f"slack must be in (0, 1], got {slack}")
    if any(f <= 0 for f in fractions) or sum(fractions) > 1 + 1e-9:
        raise InputError(f"fractions must be positive and sum to at most 1, got {list(fractions)}")
    return tuple(int(math.floor(f * n * slack + 1e-9)) for f in fractions)


def make_solution(
    problem: KCutProblem,
    assignment: Sequence[int],
    optimal: bool,
    nodes: int = 0,
    timed_out: bool = False,
) -> KCutSolution:
    assignment = tuple(int(a) for a in assignment)
    kept = int(problem.weights[np.asarray(assignment, dtype=np.int64) > 0].sum()) if assignment else 0
    gap = 0 if optimal else problem.total_weight - kept
    return KCutSolution(assignment, kept, optimal, gap, nodes, timed_out)


# -- JSON ------------------------------------------------------------------

def problem_to_dict(problem: KCutProblem) -> dict:
    weights = problem.weights
    return {
        "vertices": [{"id": problem.labels[v], "weight": int(weights[v])} for v in range(problem.n)],
        "edges": [[problem.labels[u], problem.labels[v]] for u, v in problem.edge_list()],
        "k": problem.k,
        "bounds": list(problem.bounds),
        "time_budget": problem.time_budget,
        "node_limit": problem.node_limit,
    }


def problem_from_dict(data: dict, time_budget: float | None = None, node_limit: int | None = None) -> KCutProblem:
    """Vertex ids may be any JSON scalars; vertices are indexed in listing order."""
    try:
        vertices = data["vertices"]
        index = {}
        graph = nx.Graph()
        for i, vertex in enumerate(vertices):
            vid = vertex["id"]
            if vid in index:
                raise InputError(f"duplicate vertex id {vid!r}")
            index[vid] = i
            graph.add_node(i, weight=vertex.get("weight", 1))
        for u, v in data.get("edges", []):
            if u not in index or v not in index:
                raise InputError(f"edge [{u!r}, {v!r}] references an unknown vertex")
            graph.add_edge(index[u], index[v])
        budget = time_budget if time_budget is not None else data.get("time_budget")
        limit = node_limit if node_limit is not None else data.get("node_limit")
        return KCutProblem(graph, int(data["k"]), tuple(data["bounds"]), budget, tuple(index), node_limit=limit)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed k-cut problem: {exc!r}") from exc


def load_problem(path: str | Path, time_budget: float | None = None, node_limit: int | None = None) -> KCutProblem:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})", line=exc.lineno) from exc
    return problem_from_dict(data, time_budget, node_limit)


def solution_to_dict(problem: KCutProblem, solution: KCutSolution) -> dict:
    return {
        "assignment": list(solution.assignment),
        "kept_weight": solution.kept_weight,
        "removed_weight": problem.total_weight - solution.kept_weight,
        "removed": [problem.labels[v] for v in solution.removed],
        "partition_weights": solution.partition_weights(problem),
        "optimal": solution.optimal,
        "gap": solution.gap,
        "timed_out": solution.timed_out,
    }
