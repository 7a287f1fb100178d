"""
Raw activity preprocessing: nM measurements to pChEMBL-scale datasets.

Binary mode labels a molecule active when pX > 6 and drops ambiguous
censored measurements; continuous mode keeps exact measurements inside the
5 < pX < 9 window. Duplicate SMILES are merged per group.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from enum import Enum
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from molsplit.errors import InputError
from molsplit.molio.dataset import DEFAULT_NBITS, DEFAULT_RADIUS, SMILES_CSV, Dataset, Record, read_frame
from molsplit.molio.fingerprint import morgan_fingerprint
from molsplit.molio.smiles import parse_smiles

logger = logging.getLogger(__name__)

RELATIONS = ("=", "<", ">")


class ActivityMode(str, Enum):
    BINARY = "binary"
    CONTINUOUS = "continuous"


class ActivityRow(NamedTuple):
    smiles: str
    value_nm: float
    relation: str = "="


def to_pchembl(value_nm: float) -> float:
    """pX = 9 - log10(value in nM)."""
    if not value_nm > 0:
        raise InputError(f"activity value must be positive, got {value_nm}")
    return 9.0 - math.log10(value_nm)


def load_activity_csv(path: str | Path) -> list[ActivityRow]:
    """Read ``smiles,value[,relation]`` rows; relation defaults to '='."""
    path = Path(path)
    frame = read_frame(path)
    for column in ("smiles", "value"):
        if column not in frame.columns:
            raise InputError(f"{path}: activity header is missing the '{column}' column")
    has_relation = "relation" in frame.columns

    rows: list[ActivityRow] = []
    for row in frame.itertuples(index=True):
        line = row.Index + 2
        try:
            value = float(row.value)
        except ValueError:
            raise InputError(f"value '{row.value}' is not a number", line=line) from None
        if not value > 0 or not math.isfinite(value):
            raise InputError(f"activity value must be positive, got {row.value}", line=line)
        relation = row.relation.strip() if has_relation else "="
        if relation not in RELATIONS:
            raise InputError(f"relation '{relation}' must be one of = < >", line=line)
        rows.append(ActivityRow(row.smiles.strip(), value, relation))
    return rows


def _is_ambiguous(row: ActivityRow, cutoff_nm: float) -> bool:
    if row.relation == "<":
        return row.value_nm > cutoff_nm
    if row.relation == ">":
        return row.value_nm < cutoff_nm
    return False


def preprocess_activity(
    raw: Iterable[ActivityRow | tuple],
    mode: ActivityMode | str = ActivityMode.BINARY,
    active_threshold: float = 6.0,
    ambiguous_cutoff_nm: float = 10_000.0,
    max_group_range: float = 1.0,
    radius: int = DEFAULT_RADIUS,
    nbits: int = DEFAULT_NBITS,
) -> Dataset:
    """Turn raw (smiles, nM, relation) measurements into a fingerprinted Dataset.

    Record ids are the SMILES strings; output order is first appearance.
    """
    mode = ActivityMode(mode)
    groups: dict[str, list[float]] = {}
    dropped = Counter()

    for i, item in enumerate(raw):
        row = ActivityRow(*item)
        if row.relation not in RELATIONS:
            raise InputError(f"row {i + 1}: relation '{row.relation}' must be one of = < >")
        if not row.value_nm > 0:
            raise InputError(f"row {i + 1}: activity value must be positive, got {row.value_nm}")
        px = to_pchembl(row.value_nm)
        if mode is ActivityMode.BINARY:
            if _is_ambiguous(row, ambiguous_cutoff_nm):
                dropped["ambiguous"] += 1
                continue
        elif row.relation != "=" or not 5.0 < px < 9.0:
            dropped["out_of_window"] += 1
            continue
        groups.setdefault(row.smiles, []).append(px)

    records: list[Record] = []
    for smiles, values in groups.items():
        if mode is ActivityMode.BINARY:
            labels = {int(v > active_threshold) for v in values}
            if len(labels) > 1:
                dropped["conflicting_group"] += 1
                continue
            value, label = float(np.median(values)), labels.pop()
        else:
            if max(values) - min(values) > max_group_range:
                dropped["wide_group"] += 1
                continue
            value, label = float(np.median(values)), None
        fp = morgan_fingerprint(parse_smiles(smiles), radius=radius, nbits=nbits)
        records.append(Record(id=smiles, fingerprint=fp, smiles=smiles, value=value, label=label))

    if dropped:
        logger.info("Preprocessing dropped: %s", dict(sorted(dropped.items())))
    if not records:
        raise InputError("no activity rows survived preprocessing")
    logger.info("Preprocessed %d unique molecules (%s mode)", len(records), mode.value)
    return Dataset(tuple(records), source_format=SMILES_CSV, radius=radius)
