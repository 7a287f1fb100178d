"""
Split evaluation metrics over externally produced predictions.

Hi folds are scored with average precision (tied scores form one bucket),
Lo folds with Spearman's rho computed per cluster and averaged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from scipy import stats

from molsplit.errors import InputError, MetricError
from molsplit.molio.dataset import read_frame

logger = logging.getLogger(__name__)


class MetricMode(str, Enum):
    HI = "hi"
    LO = "lo"


@dataclass(frozen=True)
class PredictionRow:
    id: str
    truth: float
    score: float
    cluster: str | None = None


@dataclass(frozen=True, eq=False)
class PredictionTable:
    rows: tuple[PredictionRow, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        seen: set[str] = set()
        for row in self.rows:
            if row.id in seen:
                raise InputError(f"duplicate prediction id '{row.id}'")
            seen.add(row.id)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def truth(self) -> np.ndarray:
        return np.array([r.truth for r in self.rows], dtype=np.float64)

    @property
    def score(self) -> np.ndarray:
        return np.array([r.score for r in self.rows], dtype=np.float64)

    @property
    def has_clusters(self) -> bool:
        return bool(self.rows) and all(r.cluster is not None for r in self.rows)

    def clusters(self) -> dict[str, list[int]]:
        """Row indices per cluster, clusters in first-appearance order."""
        groups: dict[str, list[int]] = {}
        for i, row in enumerate(self.rows):
            if row.cluster is None:
                raise MetricError(f"row '{row.id}' has no cluster; Lo metrics need a cluster column")
            groups.setdefault(row.cluster, []).append(i)
        return groups

    def with_scores(self, scores) -> "PredictionTable":
        return PredictionTable(tuple(
            PredictionRow(r.id, r.truth, float(s), r.cluster) for r, s in zip(self.rows, scores)
        ))


def load_predictions(path: str | Path) -> PredictionTable:
    """Read ``id,truth,score[,cluster]``."""
    path = Path(path)
    frame = read_frame(path)
    for column in ("id", "truth", "score"):
        if column not in frame.columns:
            raise InputError(f"{path}: prediction header is missing the '{column}' column")
    has_cluster = "cluster" in frame.columns

    rows = []
    for row in frame.itertuples(index=True):
        line = row.Index + 2
        try:
            truth, score = float(row.truth), float(row.score)
        except ValueError:
            raise InputError(f"truth '{row.truth}' / score '{row.score}' must be numbers", line=line) from None
        if not (np.isfinite(truth) and np.isfinite(score)):
            raise InputError("truth and score must be finite", line=line)
        cluster = (row.cluster.strip() or None) if has_cluster else None
        rows.append(PredictionRow(row.id.strip(), truth, score, cluster))
    return PredictionTable(tuple(rows))


# -- average precision -----------------------------------------------------

def average_precision(truth: np.ndarray, score: np.ndarray) -> float:
    """Sum over score buckets of precision x recall gained; tied scores share a bucket."""
    truth = np.asarray(truth, dtype=np.float64)
    score = np.asarray(score, dtype=np.float64)
    if truth.size == 0:
        raise MetricError("no predictions")
    if not np.isin(truth, (0.0, 1.0)).all():
        raise MetricError("PR AUC needs binary truth labels (0/1)")
    n_pos = int(truth.sum())
    if n_pos == 0 or n_pos == truth.size:
        raise MetricError("PR AUC needs at least one positive and one negative label")

    order = np.argsort(-score, kind="stable")
    s, y = score[order], truth[order]

    # last index of each bucket of equal scores
    mask = np.ones(len(s), dtype=bool)
    mask[:-1] = s[:-1] != s[1:]
    ends = np.flatnonzero(mask)
    tp = np.cumsum(y)[ends]
    hits = np.diff(np.concatenate([[0.0], tp]))
    precision = tp / (ends + 1)
    return float(np.sum(precision * hits) / n_pos)


def pr_auc(table: PredictionTable) -> float:
    return average_precision(table.truth, table.score)


# -- Spearman --------------------------------------------------------------

def spearman(truth: np.ndarray, pred: np.ndarray) -> float:
    """Spearman's rho with average ranks for ties; constant predictions score 0."""
    truth = np.asarray(truth, dtype=np.float64)
    pred = np.asarray(pred, dtype=np.float64)
    if truth.size < 2:
        raise MetricError(f"Spearman needs at least 2 members, got {truth.size}")
    if np.all(truth == truth[0]):
        raise MetricError("Spearman needs non-constant truth values")
    if np.all(pred == pred[0]):
        return 0.0
    rx = stats.rankdata(truth) - (truth.size + 1) / 2
    ry = stats.rankdata(pred) - (pred.size + 1) / 2
    rho = np.sum(rx * ry) / np.sqrt(np.sum(rx * rx) * np.sum(ry * ry))
    return float(np.clip(rho, -1.0, 1.0))


def cluster_spearman(table: PredictionTable) -> dict[str, float]:
    """rho per cluster, in first-appearance order."""
    if len(table) == 0:
        raise MetricError("prediction table is empty")
    truth, score = table.truth, table.score
    return {
        cluster: spearman(truth[idx], score[idx])
        for cluster, idx in table.clusters().items()
    }


def mean_cluster_spearman(table: PredictionTable) -> float:
    return float(np.mean(list(cluster_spearman(table).values())))


# -- baselines and reports -------------------------------------------------

def dummy_baseline(table: PredictionTable, mode: MetricMode | str) -> float:
    """Score of a constant predictor under ``mode``'s metric."""
    constant = table.with_scores(np.zeros(len(table)))
    if MetricMode(mode) is MetricMode.HI:
        return pr_auc(constant)
    return mean_cluster_spearman(constant)


@dataclass
class MetricResult:
    mode: MetricMode
    metric: str
    value: float
    dummy: float
    n: int
    per_cluster: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        data = {
            "mode": self.mode.value,
            "metric": self.metric,
            "value": self.value,
            "dummy_baseline": self.dummy,
            "n": self.n,
        }
        if self.per_cluster:
            data["per_cluster"] = self.per_cluster
        return data


def evaluate(table: PredictionTable, mode: MetricMode | str) -> MetricResult:
    mode = MetricMode(mode)
    if mode is MetricMode.HI:
        result = MetricResult(mode, "pr_auc", pr_auc(table), dummy_baseline(table, mode), len(table))
    else:
        per_cluster = cluster_spearman(table)
        result = MetricResult(
            mode,
            "mean_cluster_spearman",
            float(np.mean(list(per_cluster.values()))),
            dummy_baseline(table, mode),
            len(table),
            per_cluster,
        )
    logger.info("%s = %.4f over %d predictions", result.metric, result.value, result.n)
    return result
