"""Molecule input/output: SMILES parsing, fingerprints, datasets and activity data."""

from molsplit.molio.activity import (
    ActivityMode,
    ActivityRow,
    load_activity_csv,
    preprocess_activity,
    to_pchembl,
)
from molsplit.molio.dataset import (
    FINGERPRINT_CSV,
    FORMATS,
    SMILES_CSV,
    Dataset,
    Record,
    dataset_frame,
    detect_format,
    load_dataset,
    write_dataset,
)
from molsplit.molio.fingerprint import Fingerprint, morgan_fingerprint
from molsplit.molio.smiles import Atom, Bond, BondOrder, MolecularGraph, parse_smiles

__all__ = [
    "ActivityMode",
    "ActivityRow",
    "Atom",
    "Bond",
    "BondOrder",
    "Dataset",
    "FINGERPRINT_CSV",
    "FORMATS",
    "Fingerprint",
    "MolecularGraph",
    "Record",
    "SMILES_CSV",
    "dataset_frame",
    "detect_format",
    "load_activity_csv",
    "load_dataset",
    "morgan_fingerprint",
    "parse_smiles",
    "preprocess_activity",
    "to_pchembl",
    "write_dataset",
]
