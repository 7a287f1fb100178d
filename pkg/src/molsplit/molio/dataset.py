"""Dataset container plus the smiles-csv / fingerprint-csv readers and writers."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd

from molsplit.errors import InputError
from molsplit.molio.fingerprint import Fingerprint, morgan_fingerprint
from molsplit.molio.smiles import parse_smiles

logger = logging.getLogger(__name__)

SMILES_CSV = "smiles-csv"
FINGERPRINT_CSV = "fingerprint-csv"
FORMATS = (SMILES_CSV, FINGERPRINT_CSV)

DEFAULT_RADIUS = 2
DEFAULT_NBITS = 1024


@dataclass(frozen=True)
class Record:
    id: str
    fingerprint: Fingerprint
    smiles: str | None = None
    value: float | None = None
    label: int | None = None


@dataclass(frozen=True, eq=False)
class Dataset:
    """Ordered, id-unique collection of fingerprinted molecules."""
    records: tuple[Record, ...]
    source_format: str = SMILES_CSV
    radius: int | None = DEFAULT_RADIUS
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        index: dict[str, int] = {}
        for i, rec in enumerate(records):
            if rec.id in index:
                raise InputError(f"duplicate id '{rec.id}'")
            index[rec.id] = i
        widths = sorted({rec.fingerprint.nbits for rec in records})
        if len(widths) > 1:
            raise InputError(f"mixed fingerprint widths in dataset: {widths}")
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i: int) -> Record:
        return self.records[i]

    @property
    def ids(self) -> list[str]:
        return [rec.id for rec in self.records]

    @property
    def nbits(self) -> int:
        return self.records[0].fingerprint.nbits if self.records else DEFAULT_NBITS

    def index_of(self, record_id: str) -> int:
        try:
            return self._index[record_id]
        except KeyError:
            raise InputError(f"unknown id '{record_id}'") from None

    def indices(self, ids: Iterable[str]) -> np.ndarray:
        return np.array([self.index_of(i) for i in ids], dtype=np.int64)

    def subset(self, ids: Iterable[str]) -> "Dataset":
        return Dataset(
            tuple(self.records[i] for i in self.indices(ids)),
            source_format=self.source_format,
            radius=self.radius,
        )

    @cached_property
    def fingerprint_matrix(self) -> np.ndarray:
        """Read-only (n, nbits) boolean matrix, one row per record."""
        if not self.records:
            matrix = np.zeros((0, self.nbits), dtype=bool)
        else:
            matrix = np.stack([rec.fingerprint.bits for rec in self.records])
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def popcounts(self) -> np.ndarray:
        return np.array([rec.fingerprint.popcount for rec in self.records], dtype=np.int64)

    def values(self) -> np.ndarray:
        """Continuous values as float64; raises if any record lacks one."""
        missing = [rec.id for rec in self.records if rec.value is None]
        if missing:
            raise InputError(
                f"{len(missing)} record(s) have no value (first: '{missing[0]}'); "
                "a continuous value column is required"
            )
        return np.array([rec.value for rec in self.records], dtype=np.float64)

    @property
    def has_values(self) -> bool:
        return any(rec.value is not None for rec in self.records)

    @property
    def has_labels(self) -> bool:
        return any(rec.label is not None for rec in self.records)


# -- reading ---------------------------------------------------------------

def detect_format(path: str | Path) -> str:
    """Pick the dataset format from the header row: an ``fp`` column means fingerprint-csv."""
    header = read_frame(path, nrows=0).columns
    if "fp" in header:
        return FINGERPRINT_CSV
    if "smiles" in header:
        return SMILES_CSV
    raise InputError(f"{path}: header needs an 'fp' or 'smiles' column, got {list(header)}")


def read_frame(path: str | Path, nrows: int | None = None) -> pd.DataFrame:
    """Read a UTF-8 CSV as strings; unreadable files raise InputError."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"file not found: {path}")
    try:
        return pd.read_csv(
            path, dtype=str, keep_default_na=False, nrows=nrows, encoding="utf-8"
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: cannot read CSV ({exc})") from exc


def _parse_value(raw: str, line: int) -> float | None:
    if raw == "":
        return None
    try:
        value = float(raw)
    except ValueError:
        raise InputError(f"value '{raw}' is not a number", line=line) from None
    if not np.isfinite(value):
        raise InputError(f"value '{raw}' is not finite", line=line)
    return value


def _parse_label(raw: str, line: int) -> int | None:
    if raw == "":
        return None
    if raw not in ("0", "1"):
        raise InputError(f"label '{raw}' must be 0 or 1", line=line)
    return int(raw)


def load_dataset(
    path: str | Path,
    format: str | None = None,
    radius: int = DEFAULT_RADIUS,
    nbits: int = DEFAULT_NBITS,
) -> Dataset:
    """Load a dataset file, computing fingerprints for smiles-csv input.

    ``format`` is detected from the header when omitted. Row errors carry the
    1-based file line (the header is line 1).
    """
    fmt = format or detect_format(path)
    if fmt not in FORMATS:
        raise InputError(f"unknown dataset format '{fmt}' (expected one of {', '.join(FORMATS)})")
    frame = read_frame(path)
    key = "smiles" if fmt == SMILES_CSV else "fp"
    for column in ("id", key):
        if column not in frame.columns:
            raise InputError(f"{path}: {fmt} header is missing the '{column}' column")

    has_value = "value" in frame.columns
    has_label = "label" in frame.columns
    records: list[Record] = []
    width: int | None = None
    for row in frame.itertuples(index=True):
        line = row.Index + 2
        rid = getattr(row, "id").strip()
        if not rid:
            raise InputError("empty id", line=line)
        raw = getattr(row, key).strip()
        try:
            if fmt == SMILES_CSV:
                smiles = raw
                fp = morgan_fingerprint(parse_smiles(raw), radius=radius, nbits=nbits)
            else:
                smiles = None
                fp = Fingerprint.from_hex(raw)
        except InputError as exc:
            raise InputError(f"id '{rid}': {exc}", line=line) from exc
        if width is None:
            width = fp.nbits
        elif fp.nbits != width:
            raise InputError(
                f"mixed fingerprint widths: {fp.nbits} bits here, {width} on the first row",
                line=line,
            )
        records.append(Record(
            id=rid,
            fingerprint=fp,
            smiles=smiles,
            value=_parse_value(getattr(row, "value").strip(), line) if has_value else None,
            label=_parse_label(getattr(row, "label").strip(), line) if has_label else None,
        ))

    logger.info("Loaded %d records from %s (%s, %s bits)", len(records), path, fmt, width)
    return Dataset(tuple(records), source_format=fmt, radius=radius if fmt == SMILES_CSV else None)


# -- writing ---------------------------------------------------------------

def _format_value(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def dataset_frame(
    ds: Dataset,
    ids: Sequence[str] | None = None,
    format: str | None = None,
    extra: Mapping[str, Mapping[str, object]] | None = None,
) -> pd.DataFrame:
    """Tabulate ``ds`` (or the ``ids`` subset, in that order) in a dataset schema.

    ``extra`` maps column name to an id-keyed mapping; those columns are appended.
    """
    fmt = format or ds.source_format
    rows = ds.records if ids is None else [ds.records[i] for i in ds.indices(ids)]
    data: dict[str, list[str]] = {"id": [rec.id for rec in rows]}
    if fmt == SMILES_CSV:
        if any(rec.smiles is None for rec in rows):
            raise InputError("smiles-csv output needs SMILES for every record")
        data["smiles"] = [rec.smiles for rec in rows]
    else:
        data["fp"] = [rec.fingerprint.to_hex() for rec in rows]
    if ds.has_values:
        data["value"] = [_format_value(rec.value) for rec in rows]
    if ds.has_labels:
        data["label"] = ["" if rec.label is None else str(rec.label) for rec in rows]
    for column, mapping in (extra or {}).items():
        data[column] = [str(mapping[rec.id]) for rec in rows]
    return pd.DataFrame(data, columns=list(data))


def write_dataset(
    ds: Dataset,
    path: str | Path,
    ids: Sequence[str] | None = None,
    format: str | None = None,
    extra: Mapping[str, Mapping[str, object]] | None = None,
) -> Path:
    """Write ``ds`` as CSV in its source schema (or ``format``)."""
    path = Path(path)
    dataset_frame(ds, ids=ids, format=format, extra=extra).to_csv(
        path, index=False, lineterminator="\n", encoding="utf-8"
    )
    return path
