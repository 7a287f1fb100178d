"""Tests for Butina-style coarsening."""

from __future__ import annotations

import numpy as np
import pytest

from molsplit.coarsen import (
    build_coarse_graph,
    calculate_neighbors,
    cluster_nodes,
    coarse_graph,
    sort_neighbor_counts,
)
from molsplit.errors import InfeasibleError, InputError
from molsplit.kcut import KCutProblem, greedy_kcut, make_solution, solve_balanced_kcut, verify_kcut
from molsplit.simgraph import SimGraph, build_neighborhood_graph


@pytest.fixture
def star():
    return SimGraph.from_edges(5, [(0, leaf, 0.9) for leaf in range(1, 5)], 0.4)


@pytest.fixture
def path3():
    return SimGraph.from_edges(3, [(0, 1, 0.6), (1, 2, 0.6)], 0.4)


def _random_graph(rng: np.random.Generator) -> SimGraph:
    n = int(rng.integers(10, 60))
    fps = rng.random((n, 64)) < rng.uniform(0.1, 0.3)
    return build_neighborhood_graph(fps, float(rng.uniform(0.25, 0.45)))


# -- calculate_neighbors ---------------------------------------------------

class TestCalculateNeighbors:
    def test_star_counts(self, star):
        assert calculate_neighbors(star, 0.4) == [(4, 0), (1, 1), (1, 2), (1, 3), (1, 4)]

    def test_theta_above_all_edges(self, star):
        assert all(count == 0 for count, _ in calculate_neighbors(star, 0.95))

    def test_edgeless(self):
        g = SimGraph.from_edges(3, [], 0.4)
        assert calculate_neighbors(g, 0.4) == [(0, 0), (0, 1), (0, 2)]

    def test_strictly_above_theta(self):
        g = SimGraph.from_edges(2, [(0, 1, 0.5)], 0.4)
        assert calculate_neighbors(g, 0.5) == [(0, 0), (0, 1)]

    def test_theta_below_graph_threshold(self, star):
        with pytest.raises(InputError, match="below the graph threshold"):
            calculate_neighbors(star, 0.3)

    def test_sort_order(self):
        assert sort_neighbor_counts([(1, 0), (2, 1), (1, 2), (2, 3)]) == [(2, 1), (2, 3), (1, 0), (1, 2)]


# -- cluster_nodes ---------------------------------------------------------

class TestClusterNodes:
    def test_star_is_one_cluster(self, star):
        assignment, total = cluster_nodes(sort_neighbor_counts(calculate_neighbors(star, 0.4)), star, 0.4)
        assert total == 1
        assert assignment.tolist() == [1] * 5

    def test_edgeless_gives_singletons(self):
        g = SimGraph.from_edges(3, [], 0.4)
        assignment, total = cluster_nodes(sort_neighbor_counts(calculate_neighbors(g, 0.4)), g, 0.4)
        assert total == 3
        assert assignment.tolist() == [1, 2, 3]

    def test_path_middle_founds(self, path3):
        counts = sort_neighbor_counts(calculate_neighbors(path3, 0.4))
        assert counts[0] == (2, 1)
        assignment, total = cluster_nodes(counts, path3, 0.4)
        assert total == 1
        assert assignment.tolist() == [1, 1, 1]

    def test_capture_without_mutual_similarity(self):
        # 1 founds {0, 1, 2}; 0 and 2 share a cluster without an edge between them
        g = SimGraph.from_edges(4, [(0, 1, 0.6), (1, 2, 0.6), (2, 3, 0.6)], 0.4)
        assignment, total = cluster_nodes(sort_neighbor_counts(calculate_neighbors(g, 0.4)), g, 0.4)
        assert total == 2
        assert assignment.tolist() == [1, 1, 1, 2]


# -- build_coarse_graph ----------------------------------------------------

class TestBuildCoarseGraph:
    def test_single_cluster(self, star):
        coarse = build_coarse_graph(np.ones(5, dtype=np.int64), 1, star)
        assert coarse.m == 1
        assert coarse.node_weight.tolist() == [5]
        assert coarse.edges.shape == (0, 2)

    def test_two_clusters_one_edge(self):
        g = SimGraph.from_edges(2, [(0, 1, 0.5)], 0.4)
        coarse = build_coarse_graph(np.array([1, 2]), 2, g)
        assert coarse.edges.tolist() == [[0, 1]]
        assert coarse.adjacency == [[1], [0]]

    def test_triangle_of_singletons(self):
        g = SimGraph.from_edges(3, [(0, 1, 0.5), (1, 2, 0.5), (0, 2, 0.5)], 0.4)
        coarse = build_coarse_graph(np.array([1, 2, 3]), 3, g)
        assert coarse.node_weight.tolist() == [1, 1, 1]
        assert coarse.edges.tolist() == [[0, 1], [0, 2], [1, 2]]

    def test_member_map_and_expand(self):
        g = SimGraph.from_edges(4, [(0, 3, 0.5)], 0.4)
        coarse = build_coarse_graph(np.array([2, 1, 2, 1]), 2, g)
        assert [m.tolist() for m in coarse.member_map] == [[1, 3], [0, 2]]
        assert coarse.expand([5, 7]).tolist() == [7, 5, 7, 5]
        with pytest.raises(ValueError):
            coarse.expand([1, 2, 3])

    def test_zero_based_assignment_rejected(self, star):
        with pytest.raises(ValueError):
            build_coarse_graph(np.zeros(5, dtype=np.int64), 1, star)

    def test_to_networkx_weights(self, path3):
        graph = coarse_graph(path3).to_networkx()
        assert dict(graph.nodes(data="weight")) == {0: 3}


# -- coarse_graph ----------------------------------------------------------

class TestCoarseGraph:
    def test_star_end_to_end(self, star):
        coarse = coarse_graph(star)
        assert coarse.m == 1
        assert coarse.total_weight == 5

    def test_structure_on_random_graphs(self):
        rng = np.random.default_rng(42)
        for _ in range(30):
            g = _random_graph(rng)
            coarse = coarse_graph(g)
            assert coarse.m <= g.n
            assert coarse.total_weight == g.n
            members = np.sort(np.concatenate(coarse.member_map))
            assert members.tolist() == list(range(g.n))
            expected = {
                (min(a, b), max(a, b))
                for u, v, _ in g.edges()
                for a, b in [(int(coarse.cluster_of[u]), int(coarse.cluster_of[v]))]
                if a != b
            }
            assert {tuple(e) for e in coarse.edges.tolist()} == expected


class TestCoarseningSoundness:
    def test_expanded_solutions_verify(self):
        rng = np.random.default_rng(2024)
        checked = 0
        for _ in range(100):
            g = _random_graph(rng)
            coarse = coarse_graph(g)
            k = int(rng.integers(2, 4))
            problem = KCutProblem(coarse.to_networkx(), k, (1,) * k)
            try:
                solution = greedy_kcut(problem) if coarse.m > 14 else solve_balanced_kcut(problem)
            except InfeasibleError:
                continue
            assignment = coarse.expand(solution.assignment)
            molecules = KCutProblem.from_edges([1] * g.n, [(u, v) for u, v, _ in g.edges()], k, (1,) * k)
            report = verify_kcut(molecules, make_solution(molecules, assignment, solution.optimal))
            assert report.ok, report.violations
            checked += 1
        assert checked >= 50
