"""Dataset splitters: Hi (k-cut), greedy baseline and Lo (cluster extraction)."""

from molsplit.split.greedy import greedy_split
from molsplit.split.hi import hi_split, hi_train_test_split, make_folds, partition_dataset
from molsplit.split.lo import (
    STD_THRESHOLDS,
    check_lo_manifest,
    get_lo_folds,
    get_lo_split,
    select_distinct_clusters,
)
from molsplit.split.manifest import (
    Fold,
    LoCluster,
    SplitKind,
    SplitManifest,
    load_manifest,
    write_split,
)

__all__ = [
    "Fold",
    "LoCluster",
    "STD_THRESHOLDS",
    "SplitKind",
    "SplitManifest",
    "check_lo_manifest",
    "get_lo_folds",
    "get_lo_split",
    "greedy_split",
    "hi_split",
    "hi_train_test_split",
    "load_manifest",
    "make_folds",
    "partition_dataset",
    "select_distinct_clusters",
    "write_split",
]
