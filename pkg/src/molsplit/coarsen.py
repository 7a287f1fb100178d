"""
Butina-style coarsening of a SimGraph into a weighted cluster graph.

The sweep follows the neighbor-count ordering once and never re-sorts:
a founder captures every still-unassigned neighbor with similarity above
theta, so members of one cluster need not be similar to each other.
Any k-cut of the coarse graph lifts to a valid molecule-level k-cut.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import networkx as nx
import numpy as np
from scipy import sparse

from molsplit.errors import InputError
from molsplit.simgraph import SimGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CoarseGraph:
    m: int
    node_weight: np.ndarray
    edges: np.ndarray  # (E, 2) unique cluster pairs, a < b, lexicographic
    member_map: tuple[np.ndarray, ...]
    cluster_of: np.ndarray

    @property
    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.m)]
        for a, b in self.edges:
            adj[a].append(int(b))
            adj[b].append(int(a))
        return [sorted(nbrs) for nbrs in adj]

    @property
    def total_weight(self) -> int:
        return int(self.node_weight.sum())

    def expand(self, assignment: Sequence[int]) -> np.ndarray:
        """Lift a per-cluster assignment to one value per molecule."""
        assignment = np.asarray(assignment, dtype=np.int64)
        if assignment.shape != (self.m,):
            raise ValueError(f"assignment has {assignment.size} entries, expected {self.m}")
        return assignment[self.cluster_of]

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from((c, {"weight": int(w)}) for c, w in enumerate(self.node_weight))
        graph.add_edges_from((int(a), int(b)) for a, b in self.edges)
        return graph


def calculate_neighbors(g: SimGraph, theta: float) -> list[tuple[int, int]]:
    """(count of incident edges with similarity > theta, vertex) for every vertex."""
    if theta < g.threshold:
        raise InputError(
            f"theta {theta} is below the graph threshold {g.threshold}; "
            "edges under the threshold are not stored"
        )
    above = np.concatenate([[0], np.cumsum(g.matrix.data > theta)])
    counts = above[g.matrix.indptr[1:]] - above[g.matrix.indptr[:-1]]
    return [(int(c), v) for v, c in enumerate(counts)]


def sort_neighbor_counts(counts: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Descending count; ties by ascending vertex index."""
    return sorted(counts, key=lambda cv: (-cv[0], cv[1]))


def cluster_nodes(
    sorted_counts: list[tuple[int, int]], g: SimGraph, theta: float
) -> tuple[np.ndarray, int]:
    """Greedy sweep; returns 1-based cluster ids per vertex and the cluster count."""
    assignment = np.zeros(g.n, dtype=np.int64)
    cluster_id = 1
    for _, v in sorted_counts:
        if assignment[v]:
            continue
        assignment[v] = cluster_id
        nbrs = g.neighbors(v)[g.similarities(v) > theta]
        free = nbrs[assignment[nbrs] == 0]
        assignment[free] = cluster_id
        cluster_id += 1
    return assignment, cluster_id - 1


def build_coarse_graph(assignment: np.ndarray, total_clusters: int, g: SimGraph) -> CoarseGraph:
    assignment = np.asarray(assignment, dtype=np.int64)
    if assignment.shape != (g.n,) or (g.n and assignment.min() < 1):
        raise ValueError("assignment must give every vertex a 1-based cluster id")
    cluster_of = assignment - 1
    weights = np.bincount(cluster_of, minlength=total_clusters).astype(np.int64)

    upper = sparse.triu(g.matrix, k=1).tocoo()
    a, b = cluster_of[upper.row], cluster_of[upper.col]
    crossing = a != b
    pairs = np.stack([np.minimum(a, b)[crossing], np.maximum(a, b)[crossing]], axis=1)
    edges = np.unique(pairs, axis=0) if len(pairs) else np.zeros((0, 2), dtype=np.int64)

    by_cluster = np.argsort(cluster_of, kind="stable")
    bounds = np.concatenate([[0], np.cumsum(weights)])
    member_map = tuple(by_cluster[bounds[c]:bounds[c + 1]] for c in range(total_clusters))

    return CoarseGraph(
        m=total_clusters,
        node_weight=weights,
        edges=edges.astype(np.int64),
        member_map=member_map,
        cluster_of=cluster_of,
    )


def coarse_graph(g: SimGraph, theta: float | None = None) -> CoarseGraph:
    """calculate_neighbors -> sort -> cluster_nodes -> build_coarse_graph."""
    theta = g.threshold if theta is None else theta
    counts = sort_neighbor_counts(calculate_neighbors(g, theta))
    assignment, total = cluster_nodes(counts, g, theta)
    coarse = build_coarse_graph(assignment, total, g)
    logger.info(
        "Coarsened %d molecules to %d clusters (%d cluster edges, theta %.3f)",
        g.n, coarse.m, len(coarse.edges), theta,
    )
    return coarse
