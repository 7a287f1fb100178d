"""Split-then-discard baseline: random split, then drop test molecules too close to train."""

from __future__ import annotations

import logging

import numpy as np

from molsplit.errors import InputError
from molsplit.molio.dataset import Dataset
from molsplit.simgraph import DEFAULT_THRESHOLD, max_similarity
from molsplit.split.manifest import Fold, SplitKind, SplitManifest

logger = logging.getLogger(__name__)


def greedy_split(
    ds: Dataset,
    threshold: float = DEFAULT_THRESHOLD,
    test_fraction: float = 0.1,
    seed: int = 0,
) -> SplitManifest:
    """One fold; ``removed`` holds the discarded test molecules.

    The initial partition is a seeded random permutation (no scaffold split);
    the manifest records this under ``initial_partition``.
    """
    if not 0 < test_fraction < 1:
        raise InputError(f"test fraction must be in (0, 1), got {test_fraction}")
    n = len(ds)
    if n < 2:
        raise InputError(f"need at least 2 molecules to split, got {n}")
    if not 0 < threshold <= 1:
        raise InputError(f"threshold must be in (0, 1], got {threshold}")

    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    n_test = min(max(int(round(n * test_fraction)), 1), n - 1)
    test_idx = np.sort(perm[:n_test])
    train_idx = np.sort(perm[n_test:])

    fps = ds.fingerprint_matrix
    nearest = max_similarity(fps[test_idx], fps[train_idx])
    leaking = nearest >= threshold

    ids = ds.ids
    manifest = SplitManifest(
        kind=SplitKind.GREEDY,
        folds=[Fold(
            train=[ids[i] for i in train_idx],
            test=[ids[i] for i in test_idx[~leaking]],
        )],
        removed=[ids[i] for i in test_idx[leaking]],
        parameters={
            "threshold": threshold,
            "test_fraction": test_fraction,
            "seed": seed,
            "initial_partition": "seeded-random",
            "fingerprint": {"format": ds.source_format, "nbits": ds.nbits, "radius": ds.radius},
        },
    )
    logger.info("Greedy split: %d train, %d test, %d removed", len(train_idx), n_test, manifest.n_removed)
    return manifest
