"""
Lead Optimization splitting.

Repeatedly picks, from the remaining pool, the molecule with the fewest
pool neighbours (similarity >= t) among those with more than m neighbours
and a neighbourhood value spread above std_t. The center and its pool
neighbours form a cluster: the center stays in train as the anchor, the
rest become test. Neighbour counts and spreads include the center.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from molsplit.errors import InputError
from molsplit.molio.dataset import Dataset
from molsplit.simgraph import DEFAULT_THRESHOLD, build_neighborhood_graph
from molsplit.split.manifest import Fold, LoCluster, SplitKind, SplitManifest

logger = logging.getLogger(__name__)

DEFAULT_MIN_SIZE = 5
STD_THRESHOLDS = {"pki": 0.60, "pic50": 0.70}
DEFAULT_SEEDS = (0, 1, 2)


def _check_params(t: float, m: int, max_clusters: int | None, std_t: float) -> None:
    if not 0 < t <= 1:
        raise InputError(f"similarity threshold must be in (0, 1], got {t}")
    if m < 2:
        raise InputError(f"minimum cluster size must be >= 2, got {m}")
    if max_clusters is not None and max_clusters < 0:
        raise InputError(f"max clusters must be >= 0, got {max_clusters}")
    if std_t < 0:
        raise InputError(f"std threshold must be >= 0, got {std_t}")


def select_distinct_clusters(
    ds: Dataset,
    t: float = DEFAULT_THRESHOLD,
    m: int = DEFAULT_MIN_SIZE,
    max_clusters: int | None = None,
    std_t: float = STD_THRESHOLDS["pki"],
    seed: int | None = None,
    threads: int = 1,
    fold: int = 0,
) -> tuple[list[LoCluster], list[str]]:
    """Extract clusters smallest-first; returns (clusters, remaining pool ids).

    ``max_clusters=None`` means no limit. Ties on neighbour count go to the
    lower index, or to a seeded random order when ``seed`` is given.
    """
    _check_params(t, m, max_clusters, std_t)
    values = ds.values()
    n = len(ds)
    graph = build_neighborhood_graph(ds, t, threads=threads)
    adjacency = graph.matrix.astype(bool).astype(np.int64)
    rank = np.arange(n) if seed is None else np.random.default_rng(seed).permutation(n)

    pool = np.ones(n, dtype=bool)
    clusters: list[LoCluster] = []
    ids = ds.ids
    while max_clusters is None or len(clusters) < max_clusters:
        counts = 1 + adjacency @ pool.astype(np.int64)
        candidates = np.flatnonzero(pool & (counts > m))
        chosen = None
        for v in sorted(candidates, key=lambda v: (counts[v], rank[v])):
            nbrs = graph.neighbors(v)
            members = np.concatenate([[v], nbrs[pool[nbrs]]])
            if np.std(values[members]) > std_t:
                chosen = members
                break
        if chosen is None:
            break
        pool[chosen] = False
        clusters.append(LoCluster(
            cluster_id=len(clusters),
            center=ids[chosen[0]],
            members=tuple(ids[i] for i in chosen),
            values=tuple(float(values[i]) for i in chosen),
            fold=fold,
        ))
        logger.debug("Lo cluster %d: center %s, %d members", len(clusters) - 1, ids[chosen[0]], len(chosen))

    remaining = [ids[i] for i in np.flatnonzero(pool)]
    logger.info("Selected %d Lo clusters; %d molecules remain in the pool", len(clusters), len(remaining))
    return clusters, remaining


def _parameters(ds: Dataset, t, m, max_clusters, std_t, seeds) -> dict:
    return {
        "threshold": t,
        "min_size": m,
        "max_clusters": max_clusters,
        "std_threshold": std_t,
        "seeds": list(seeds),
        "neighborhood": "center",
        "std_includes_center": True,
        "fingerprint": {"format": ds.source_format, "nbits": ds.nbits, "radius": ds.radius},
    }


def _fold(ds: Dataset, clusters: list[LoCluster], remaining: list[str]) -> Fold:
    keep = set(remaining) | {c.anchor for c in clusters}
    train = [rid for rid in ds.ids if rid in keep]
    test = [member for c in clusters for member in c.test_members]
    return Fold(train=train, test=test)


def get_lo_split(
    ds: Dataset,
    t: float = DEFAULT_THRESHOLD,
    m: int = DEFAULT_MIN_SIZE,
    max_clusters: int | None = None,
    std_t: float = STD_THRESHOLDS["pki"],
    seed: int | None = None,
    threads: int = 1,
) -> SplitManifest:
    """One fold: cluster members (minus anchors) test, everything else trains."""
    clusters, remaining = select_distinct_clusters(ds, t, m, max_clusters, std_t, seed, threads)
    return SplitManifest(
        kind=SplitKind.LO,
        folds=[_fold(ds, clusters, remaining)],
        clusters=clusters,
        parameters=_parameters(ds, t, m, max_clusters, std_t, [seed]),
    )


def get_lo_folds(
    ds: Dataset,
    t: float = DEFAULT_THRESHOLD,
    m: int = DEFAULT_MIN_SIZE,
    max_clusters: int | None = None,
    std_t: float = STD_THRESHOLDS["pki"],
    seeds: Sequence[int] = DEFAULT_SEEDS,
    threads: int = 1,
) -> SplitManifest:
    """One fold per seed; the seed only perturbs candidate tie-breaking."""
    folds, clusters = [], []
    for i, seed in enumerate(seeds):
        fold_clusters, remaining = select_distinct_clusters(
            ds, t, m, max_clusters, std_t, seed, threads, fold=i
        )
        folds.append(_fold(ds, fold_clusters, remaining))
        clusters.extend(fold_clusters)
    return SplitManifest(
        kind=SplitKind.LO,
        folds=folds,
        clusters=clusters,
        parameters=_parameters(ds, t, m, max_clusters, std_t, seeds),
    )


def check_lo_manifest(manifest: SplitManifest, ds: Dataset) -> list[str]:
    """Recheck every cluster plus anchor placement and cluster disjointness."""
    params = manifest.parameters
    t, m, std_t = params["threshold"], params["min_size"], params["std_threshold"]
    problems = manifest.coverage_violations(ds.ids)
    for i, fold in enumerate(manifest.folds):
        train = set(fold.train)
        seen: set[str] = set()
        for cluster in manifest.clusters_for(i):
            problems.extend(cluster.violations(ds, t, m, std_t))
            anchors_in_train = [rid for rid in cluster.members if rid in train]
            if anchors_in_train != [cluster.anchor]:
                problems.append(
                    f"fold {i + 1} cluster {cluster.cluster_id}: train holds {anchors_in_train}, "
                    f"expected only anchor '{cluster.anchor}'"
                )
            overlap = seen & set(cluster.members)
            if overlap:
                problems.append(f"fold {i + 1} cluster {cluster.cluster_id} overlaps an earlier cluster")
            seen |= set(cluster.members)
    return problems
