"""
Morgan-style circular fingerprints.

This is a documented analog of ECFP, not bit-compatible with external
toolkits. Stable hashing contract (bumping any of it bumps FORMAT_VERSION):

  - Initial atom identifier: blake2b-64 (person=b"molsplit-ecfp") over the
    little-endian int64 tuple
    (iteration=0, atomic number, heavy degree, formal charge, aromatic, H count).
  - Iteration r identifier: blake2b-64 over (r, previous own identifier)
    followed by the (bond code, neighbor identifier) pairs sorted ascending.
    Bond codes: single 1, double 2, triple 3, aromatic 4.
  - Every identifier of iterations 0..radius sets bit (identifier mod nbits).
"""

from __future__ import annotations

import hashlib
import re
import struct
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from molsplit.errors import InputError
from molsplit.molio.smiles import MolecularGraph

_PERSON = b"molsplit-ecfp"
_HEX_RE = re.compile(r"^[0-9a-f]+$")


@dataclass(frozen=True, eq=False)
class Fingerprint:
    """Immutable fixed-width bit vector with a cached popcount."""
    bits: np.ndarray
    popcount: int = field(init=False)

    def __post_init__(self) -> None:
        bits = np.array(self.bits, dtype=bool).ravel()
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "popcount", int(np.count_nonzero(bits)))

    @property
    def nbits(self) -> int:
        return int(self.bits.size)

    def on_bits(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.bits)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Fingerprint):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.nbits, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"Fingerprint(nbits={self.nbits}, popcount={self.popcount})"

    @classmethod
    def from_indices(cls, indices: Iterable[int], nbits: int) -> "Fingerprint":
        bits = np.zeros(nbits, dtype=bool)
        idx = np.fromiter(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= nbits):
            raise ValueError(f"bit index out of range for width {nbits}")
        bits[idx] = True
        return cls(bits)

    @classmethod
    def from_hex(cls, text: str, nbits: int | None = None) -> "Fingerprint":
        """Decode lowercase hex; the first digit holds bits 0-3, most significant first."""
        if not _HEX_RE.match(text):
            raise InputError(f"fingerprint is not lowercase hex: {text[:16]!r}...")
        width = 4 * len(text)
        if nbits is not None and width != nbits:
            raise InputError(f"fingerprint has {width} bits, expected {nbits}")
        padded = text + "0" if len(text) % 2 else text
        raw = np.frombuffer(bytes.fromhex(padded), dtype=np.uint8)
        return cls(np.unpackbits(raw)[:width].astype(bool))

    def to_hex(self) -> str:
        if self.nbits % 4:
            raise ValueError(f"width {self.nbits} is not a multiple of 4")
        return np.packbits(self.bits).tobytes().hex()[: self.nbits // 4]


def _digest(payload: bytes) -> int:
    return int.from_bytes(
        hashlib.blake2b(payload, digest_size=8, person=_PERSON).digest(), "little"
    )


def _bond_code(order) -> int:
    return order.value


def atom_invariants(mol: MolecularGraph) -> list[tuple[int, int, int, int, int]]:
    """(atomic number, heavy degree, charge, aromatic, attached H) per atom."""
    adjacency = mol.adjacency()
    return [
        (
            atom.atomic_number,
            len(adjacency[i]),
            atom.charge,
            int(atom.aromatic),
            mol.hydrogen_count(i, adjacency),
        )
        for i, atom in enumerate(mol.atoms)
    ]


def morgan_identifiers(mol: MolecularGraph, radius: int = 2) -> list[int]:
    """All environment identifiers for iterations 0..radius, atom-major per iteration."""
    adjacency = mol.adjacency()
    ids = [_digest(struct.pack("<6q", 0, *inv)) for inv in atom_invariants(mol)]
    identifiers = list(ids)
    for iteration in range(1, radius + 1):
        updated = []
        for i, neighbors in enumerate(adjacency):
            env = sorted((_bond_code(order), ids[j]) for j, order in neighbors)
            payload = struct.pack("<qQ", iteration, ids[i]) + b"".join(
                struct.pack("<qQ", code, nid) for code, nid in env
            )
            updated.append(_digest(payload))
        ids = updated
        identifiers.extend(ids)
    return identifiers


def morgan_fingerprint(mol: MolecularGraph, radius: int = 2, nbits: int = 1024) -> Fingerprint:
    """Fold the circular environment identifiers of ``mol`` into ``nbits`` bits."""
    if radius < 0:
        raise InputError(f"radius must be >= 0, got {radius}")
    if nbits < 64 or nbits & (nbits - 1):
        raise InputError(f"nbits must be a power of two >= 64, got {nbits}")
    return Fingerprint.from_indices(
        (identifier % nbits for identifier in morgan_identifiers(mol, radius)), nbits
    )
