"""Split manifests: fold membership, removed ids, Lo clusters and provenance, plus their files."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from molsplit import FORMAT_VERSION, __version__
from molsplit.errors import InputError
from molsplit.molio.dataset import Dataset, write_dataset
from molsplit.simgraph import bulk_tanimoto

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


class SplitKind(str, Enum):
    HI = "hi"
    GREEDY = "greedy"
    LO = "lo"


@dataclass
class Fold:
    train: list[str]
    test: list[str]

    def to_dict(self) -> dict:
        return {"train": list(self.train), "test": list(self.test)}


@dataclass(frozen=True)
class LoCluster:
    """Test cluster of a Lo split; ``anchor`` is the center, retained in train."""
    cluster_id: int
    center: str
    members: tuple[str, ...]
    values: tuple[float, ...]
    fold: int = 0

    @property
    def anchor(self) -> str:
        return self.center

    @property
    def test_members(self) -> list[str]:
        return [m for m in self.members if m != self.anchor]

    def violations(self, ds: Dataset, t: float, m: int, std_t: float) -> list[str]:
        """Recheck size, center similarity and value spread against ``ds``."""
        problems = []
        label = f"cluster {self.cluster_id}"
        if len(self.members) < m:
            problems.append(f"{label}: {len(self.members)} members, need at least {m}")
        if self.center not in self.members:
            problems.append(f"{label}: center '{self.center}' is not a member")
            return problems
        idx = ds.indices(self.members)
        fps = ds.fingerprint_matrix
        center = ds.index_of(self.center)
        sims = bulk_tanimoto(fps[[center]], fps[idx])[0]
        for member, sim in zip(self.members, sims):
            if sim < t:
                problems.append(f"{label}: '{member}' has similarity {sim:.3f} < {t} to the center")
        values = ds.values()[idx]
        spread = float(np.std(values))
        if not spread > std_t:
            problems.append(f"{label}: value std {spread:.3f} is not above {std_t}")
        return problems

    def to_dict(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "fold": self.fold,
            "center": self.center,
            "anchor": self.anchor,
            "members": list(self.members),
            "values": list(self.values),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LoCluster":
        return cls(
            cluster_id=int(data["cluster_id"]),
            center=data["center"],
            members=tuple(data["members"]),
            values=tuple(float(v) for v in data["values"]),
            fold=int(data.get("fold", 0)),
        )


@dataclass
class SplitManifest:
    kind: SplitKind
    folds: list[Fold]
    removed: list[str] = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    clusters: list[LoCluster] = field(default_factory=list)
    config: dict | None = None

    @property
    def k(self) -> int:
        return len(self.folds)

    @property
    def n_removed(self) -> int:
        return len(self.removed)

    @property
    def anchors(self) -> list[str]:
        return [c.anchor for c in self.clusters]

    def clusters_for(self, fold: int) -> list[LoCluster]:
        return [c for c in self.clusters if c.fold == fold]

    def coverage_violations(self, ids: Sequence[str]) -> list[str]:
        """Per fold: train and test disjoint, and train, test and removed cover ``ids``."""
        problems = []
        all_ids = set(ids)
        removed = set(self.removed)
        for i, fold in enumerate(self.folds, start=1):
            train, test = set(fold.train), set(fold.test)
            overlap = train & test
            if overlap:
                problems.append(f"fold {i}: {len(overlap)} ids in both train and test")
            missing = all_ids - train - test - removed
            if missing:
                problems.append(f"fold {i}: {len(missing)} ids in no set (e.g. '{sorted(missing)[0]}')")
            unknown = (train | test | removed) - all_ids
            if unknown:
                problems.append(f"fold {i}: {len(unknown)} ids not in the dataset")
        return problems

    def to_dict(self) -> dict:
        data = {
            "format_version": FORMAT_VERSION,
            "tool_version": __version__,
            "kind": self.kind.value,
            "parameters": self.parameters,
            "folds": [f.to_dict() for f in self.folds],
            "removed": list(self.removed),
            "n_removed": self.n_removed,
        }
        if self.kind is SplitKind.LO:
            data["clusters"] = [c.to_dict() for c in self.clusters]
            data["anchors"] = self.anchors
        if self.config is not None:
            data["config"] = self.config
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "SplitManifest":
        try:
            return cls(
                kind=SplitKind(data["kind"]),
                folds=[Fold(list(f["train"]), list(f["test"])) for f in data["folds"]],
                removed=list(data.get("removed", [])),
                parameters=dict(data.get("parameters", {})),
                clusters=[LoCluster.from_dict(c) for c in data.get("clusters", [])],
                config=data.get("config"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed split manifest: {exc!r}") from exc


def load_manifest(path: str | Path) -> SplitManifest:
    """Read a manifest file, or ``manifest.json`` inside a split directory."""
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    if not path.is_file():
        raise InputError(f"file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})", line=exc.lineno) from exc
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        logger.warning("Manifest %s has format version %s (this build writes %s)", path, version, FORMAT_VERSION)
    return SplitManifest.from_dict(data)


def write_split(manifest: SplitManifest, ds: Dataset, out_dir: str | Path) -> list[Path]:
    """Write manifest.json plus train_i.csv / test_i.csv (1-based) in the dataset's schema.

    Lo test files carry an extra ``cluster`` column.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i, fold in enumerate(manifest.folds, start=1):
        written.append(write_dataset(ds, out_dir / f"train_{i}.csv", ids=fold.train))
        extra = None
        if manifest.kind is SplitKind.LO:
            cluster_of = {
                member: c.cluster_id for c in manifest.clusters_for(i - 1) for member in c.test_members
            }
            extra = {"cluster": cluster_of}
        written.append(write_dataset(ds, out_dir / f"test_{i}.csv", ids=fold.test, extra=extra))
    manifest_path = out_dir / MANIFEST_NAME
    manifest_path.write_text(manifest.to_json(), encoding="utf-8")
    written.append(manifest_path)
    logger.info("Wrote %d fold(s) and manifest to %s", manifest.k, out_dir)
    return written
