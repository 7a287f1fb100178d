"""
Tanimoto similarity, the neighborhood graph and its connected components.

Edge rule: (u, v) is an edge iff tanimoto(u, v) >= threshold, so any pair
across separate components is strictly below the threshold.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np
import pandas as pd
from scipy import sparse
from scipy.sparse import csgraph

from molsplit.errors import InputError
from molsplit.molio.dataset import Dataset
from molsplit.molio.fingerprint import Fingerprint

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.4
DEFAULT_BLOCK_SIZE = 512


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|a & b| / |a | b|, or 0.0 when both are empty."""
    if a.nbits != b.nbits:
        raise InputError(f"fingerprint width mismatch: {a.nbits} vs {b.nbits}")
    inter = int(np.count_nonzero(a.bits & b.bits))
    union = a.popcount + b.popcount - inter
    return inter / union if union else 0.0


def bulk_tanimoto(
    a: np.ndarray,
    b: np.ndarray,
    pop_a: np.ndarray | None = None,
    pop_b: np.ndarray | None = None,
) -> np.ndarray:
    """Exact (len(a), len(b)) similarity matrix between two boolean fingerprint matrices.

    Values are bit-identical to :func:`tanimoto` on the same pairs.
    """
    if a.shape[1] != b.shape[1]:
        raise InputError(f"fingerprint width mismatch: {a.shape[1]} vs {b.shape[1]}")
    pop_a = a.sum(axis=1, dtype=np.int64) if pop_a is None else pop_a
    pop_b = b.sum(axis=1, dtype=np.int64) if pop_b is None else pop_b
    # float32 dot products of 0/1 rows are exact well past any practical width
    inter = np.rint(a.astype(np.float32) @ b.astype(np.float32).T).astype(np.int64)
    union = pop_a[:, None] + pop_b[None, :] - inter
    out = np.zeros(inter.shape, dtype=np.float64)
    np.divide(inter, union, out=out, where=union > 0)
    return out


def max_similarity(
    query: np.ndarray, reference: np.ndarray, block_size: int = DEFAULT_BLOCK_SIZE
) -> np.ndarray:
    """Highest similarity of each query row to any reference row (0.0 if reference is empty)."""
    out = np.zeros(query.shape[0], dtype=np.float64)
    if reference.shape[0] == 0:
        return out
    ref_pop = reference.sum(axis=1, dtype=np.int64)
    for start in range(0, query.shape[0], block_size):
        block = query[start:start + block_size]
        out[start:start + len(block)] = bulk_tanimoto(block, reference, pop_b=ref_pop).max(axis=1)
    return out


@dataclass(frozen=True, eq=False)
class SimGraph:
    """Undirected similarity graph backed by a symmetric CSR matrix of edge similarities."""
    n: int
    threshold: float
    matrix: sparse.csr_matrix

    def neighbors(self, v: int) -> np.ndarray:
        m = self.matrix
        return m.indices[m.indptr[v]:m.indptr[v + 1]]

    def similarities(self, v: int) -> np.ndarray:
        m = self.matrix
        return m.data[m.indptr[v]:m.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.matrix.indptr)

    @property
    def n_edges(self) -> int:
        return int(self.matrix.nnz // 2)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Each undirected edge once as (u, v, similarity) with u < v, in row order."""
        upper = sparse.triu(self.matrix, k=1, format="csr")
        upper.sort_indices()
        for u in range(self.n):
            lo, hi = upper.indptr[u], upper.indptr[u + 1]
            for v, s in zip(upper.indices[lo:hi], upper.data[lo:hi]):
                yield u, int(v), float(s)

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int, float]], threshold: float
    ) -> "SimGraph":
        rows, cols, data = [], [], []
        seen: set[tuple[int, int]] = set()
        for u, v, s in edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if s < threshold:
                raise ValueError(f"edge ({u}, {v}) similarity {s} is below threshold {threshold}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            rows += [u, v]
            cols += [v, u]
            data += [s, s]
        return cls(n, threshold, _symmetric_csr(n, rows, cols, data))


def _symmetric_csr(n: int, rows, cols, data) -> sparse.csr_matrix:
    matrix = sparse.coo_matrix(
        (np.asarray(data, dtype=np.float64), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(n, n),
    ).tocsr()
    matrix.sort_indices()
    return matrix


def build_neighborhood_graph(
    ds: Dataset | np.ndarray,
    threshold: float = DEFAULT_THRESHOLD,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
    prune: bool = True,
) -> SimGraph:
    """All-pairs neighborhood graph at ``threshold``.

    With ``prune`` the columns compared against a row block are limited by the
    popcount bound sim(a, b) <= min(|a|, |b|) / max(|a|, |b|); the graph is the
    same either way.
    """
    if not 0.0 < threshold <= 1.0:
        raise InputError(f"threshold must be in (0, 1], got {threshold}")
    fps = ds.fingerprint_matrix if isinstance(ds, Dataset) else np.asarray(ds, dtype=bool)
    n = fps.shape[0]
    pops = fps.sum(axis=1, dtype=np.int64)

    order = np.argsort(pops, kind="stable") if prune else np.arange(n)
    sorted_fps = fps[order]
    sorted_pops = pops[order]

    def block(start: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        stop = min(start + block_size, n)
        if prune:
            limit = sorted_pops[stop - 1] / threshold * (1 + 1e-9)
            end = int(np.searchsorted(sorted_pops, limit, side="right"))
        else:
            end = n
        sims = bulk_tanimoto(
            sorted_fps[start:stop], sorted_fps[start:end],
            sorted_pops[start:stop], sorted_pops[start:end],
        )
        i, j = np.nonzero(sims >= threshold)
        keep = j > i  # positions relative to the same start
        i, j = i[keep], j[keep]
        return order[i + start], order[j + start], sims[i, j]

    starts = range(0, n, block_size)
    if threads > 1 and n > block_size:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(block, starts))
    else:
        parts = [block(s) for s in starts]

    if parts:
        u = np.concatenate([p[0] for p in parts])
        v = np.concatenate([p[1] for p in parts])
        s = np.concatenate([p[2] for p in parts])
    else:
        u = v = np.zeros(0, dtype=np.int64)
        s = np.zeros(0, dtype=np.float64)

    matrix = _symmetric_csr(n, np.concatenate([u, v]), np.concatenate([v, u]), np.concatenate([s, s]))
    graph = SimGraph(n, float(threshold), matrix)
    logger.info("Neighborhood graph: %d vertices, %d edges at threshold %.3f", n, graph.n_edges, threshold)
    return graph


def connected_components(g: SimGraph) -> np.ndarray:
    """Component label per vertex, 0-based and ordered by smallest member index."""
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    _, labels = csgraph.connected_components(g.matrix, directed=False)
    _, first = np.unique(labels, return_index=True)
    relabel = np.empty(len(first), dtype=np.int64)
    relabel[np.argsort(first, kind="stable")] = np.arange(len(first))
    return relabel[labels]


def export_edge_list(g: SimGraph, path: str | Path) -> Path:
    """Write the ``u,v,similarity`` edge CSV (u < v)."""
    path = Path(path)
    frame = pd.DataFrame(list(g.edges()), columns=["u", "v", "similarity"])
    frame.to_csv(path, index=False, lineterminator="\n")
    return path
