"""Leakage audits of train/test splits, the #Circles diversity count and splitter comparison."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from molsplit import FORMAT_VERSION, __version__
from molsplit.errors import InputError
from molsplit.molio.dataset import Dataset
from molsplit.simgraph import DEFAULT_THRESHOLD, bulk_tanimoto, max_similarity
from molsplit.split.greedy import greedy_split
from molsplit.split.hi import DEFAULT_TIME_BUDGET, hi_train_test_split
from molsplit.split.manifest import SplitManifest

logger = logging.getLogger(__name__)

BIN_WIDTH = 0.05
BIN_EDGES = np.linspace(0.0, 1.0, 21)


@dataclass
class AuditReport:
    threshold: float
    nearest: np.ndarray  # max similarity to train, per test molecule
    test_ids: list[str] = field(default_factory=list)
    n_train: int = 0

    @property
    def n_test(self) -> int:
        return int(self.nearest.size)

    @property
    def n_leaking(self) -> int:
        return int(np.count_nonzero(self.nearest >= self.threshold))

    @property
    def leakage_fraction(self) -> float:
        return self.n_leaking / self.n_test if self.n_test else 0.0

    def histogram(self) -> list[tuple[float, float, int]]:
        counts, _ = np.histogram(self.nearest, bins=BIN_EDGES)
        return [
            (round(float(lo), 2), round(float(hi), 2), int(c))
            for lo, hi, c in zip(BIN_EDGES[:-1], BIN_EDGES[1:], counts)
        ]

    def to_dict(self, include_nearest: bool = True) -> dict:
        data = {
            "threshold": self.threshold,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "n_leaking": self.n_leaking,
            "leakage_fraction": self.leakage_fraction,
            "max_similarity": float(self.nearest.max()) if self.n_test else 0.0,
            "mean_nearest_similarity": float(self.nearest.mean()) if self.n_test else 0.0,
        }
        if include_nearest:
            ids = self.test_ids or [str(i) for i in range(self.n_test)]
            data["nearest"] = [{"id": i, "similarity": float(s)} for i, s in zip(ids, self.nearest)]
        return data


def audit_split(
    train_fps: np.ndarray,
    test_fps: np.ndarray,
    threshold: float = DEFAULT_THRESHOLD,
    test_ids: Sequence[str] | None = None,
) -> AuditReport:
    """Exact nearest-train similarity for each test molecule."""
    train_fps = np.asarray(train_fps, dtype=bool)
    test_fps = np.asarray(test_fps, dtype=bool)
    if len(train_fps) == 0 or len(test_fps) == 0:
        raise InputError(f"audit needs non-empty train and test sets (got {len(train_fps)} and {len(test_fps)})")
    if train_fps.shape[1] != test_fps.shape[1]:
        raise InputError(f"fingerprint width mismatch: train {train_fps.shape[1]}, test {test_fps.shape[1]}")
    report = AuditReport(
        threshold=threshold,
        nearest=max_similarity(test_fps, train_fps),
        test_ids=list(test_ids or []),
        n_train=len(train_fps),
    )
    logger.info(
        "Audit: %d/%d test molecules have a train neighbour >= %.2f",
        report.n_leaking, report.n_test, threshold,
    )
    return report


def audit_datasets(train: Dataset, test: Dataset, threshold: float = DEFAULT_THRESHOLD) -> AuditReport:
    return audit_split(train.fingerprint_matrix, test.fingerprint_matrix, threshold, test.ids)


def audit_manifest(manifest: SplitManifest, ds: Dataset, threshold: float | None = None) -> list[AuditReport]:
    """One report per fold, at the manifest's own threshold unless overridden."""
    threshold = manifest.parameters.get("threshold", DEFAULT_THRESHOLD) if threshold is None else threshold
    fps = ds.fingerprint_matrix
    return [
        audit_split(fps[ds.indices(fold.train)], fps[ds.indices(fold.test)], threshold, fold.test)
        for fold in manifest.folds
    ]


def write_audit(report: AuditReport, out_dir: str | Path, config: dict | None = None) -> list[Path]:
    """report.json plus histogram.csv (bin_lo,bin_hi,count)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    data = {"format_version": FORMAT_VERSION, "tool_version": __version__, **report.to_dict()}
    if config is not None:
        data["config"] = config
    report_path = out_dir / "report.json"
    report_path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    hist_path = out_dir / "histogram.csv"
    pd.DataFrame(report.histogram(), columns=["bin_lo", "bin_hi", "count"]).to_csv(
        hist_path, index=False, lineterminator="\n"
    )
    return [report_path, hist_path]


# -- #Circles --------------------------------------------------------------

def circle_representatives(fps: np.ndarray, threshold: float) -> list[int]:
    """Greedy packing in input order: keep a molecule iff it is below threshold to every kept one."""
    fps = np.asarray(fps, dtype=bool)
    if len(fps) == 0:
        raise InputError("#Circles needs at least one fingerprint")
    if not 0 < threshold <= 1:
        raise InputError(f"threshold must be in (0, 1], got {threshold}")
    pops = fps.sum(axis=1, dtype=np.int64)
    reps = [0]
    for i in range(1, len(fps)):
        sims = bulk_tanimoto(fps[i:i + 1], fps[reps], pops[i:i + 1], pops[reps])[0]
        if (sims < threshold).all():
            reps.append(i)
    return reps


def n_circles(fps: np.ndarray, threshold: float) -> int:
    return len(circle_representatives(fps, threshold))


# -- splitter comparison ---------------------------------------------------

@dataclass
class SplitterResult:
    name: str
    n_train: int
    n_test: int
    n_removed: int
    n_total: int
    leakage_fraction: float

    @property
    def removed_percent(self) -> float:
        return 100.0 * self.n_removed / self.n_total if self.n_total else 0.0

    def to_dict(self) -> dict:
        return {
            "splitter": self.name,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "n_removed": self.n_removed,
            "removed_percent": self.removed_percent,
            "leakage_fraction": self.leakage_fraction,
        }


@dataclass
class ComparisonReport:
    threshold: float
    train_fraction: float
    results: list[SplitterResult]

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "train_fraction": self.train_fraction,
            "results": [r.to_dict() for r in self.results],
        }


def _summarize(name: str, manifest: SplitManifest, ds: Dataset, threshold: float) -> SplitterResult:
    fold = manifest.folds[0]
    if fold.train and fold.test:
        leakage = audit_manifest(manifest, ds, threshold)[0].leakage_fraction
    else:
        leakage = 0.0
    return SplitterResult(name, len(fold.train), len(fold.test), manifest.n_removed, len(ds), leakage)


def compare_splitters(
    ds: Dataset,
    threshold: float = DEFAULT_THRESHOLD,
    train_fraction: float = 0.9,
    seed: int = 0,
    time_budget: float | None = DEFAULT_TIME_BUDGET,
    slack: float = 0.9,
    threads: int = 1,
) -> ComparisonReport:
    """Greedy split-and-discard vs. the Hi splitter at the same train:test ratio."""
    greedy = greedy_split(ds, threshold, 1 - train_fraction, seed)
    hi = hi_train_test_split(
        ds, threshold, train_fraction, slack=slack, time_budget=time_budget, threads=threads, seed=seed
    )
    return ComparisonReport(
        threshold=threshold,
        train_fraction=train_fraction,
        results=[
            _summarize("greedy", greedy, ds, threshold),
            _summarize("hi", hi, ds, threshold),
        ],
    )
