"""
Restricted SMILES parser.

Supports the organic subset (B, C, N, O, P, S, F, Cl, Br, I and aromatic
b, c, n, o, p, s), bracket atoms with hydrogen count and charge, branches,
ring closures (digits and %nn) and the bond symbols - = # :.

Stereochemistry, isotopes, atom classes, wildcards and multi-fragment
input are rejected with UnsupportedSmilesError naming the feature.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

from molsplit.errors import InputError, SmilesSyntaxError, UnsupportedSmilesError

# Periodic order; atomic number is index + 1.
ELEMENTS: tuple[str, ...] = (
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr",
    "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn",
    "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb",
    "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg",
    "Tl", "Pb", "Bi", "Po", "At", "Rn",
)
_ELEMENT_SET = frozenset(ELEMENTS)

ORGANIC_SUBSET = frozenset({"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"})
AROMATIC_ORGANIC = {"b": "B", "c": "C", "n": "N", "o": "O", "p": "P", "s": "S"}
AROMATIC_BRACKET = {**AROMATIC_ORGANIC, "se": "Se", "as": "As"}

# Allowed valences for implicit-hydrogen filling of organic-subset atoms.
STANDARD_VALENCES: dict[str, tuple[int, ...]] = {
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}


class BondOrder(Enum):
    SINGLE = 1
    DOUBLE = 2
    TRIPLE = 3
    AROMATIC = 4

    @property
    def valence(self) -> float:
        return 1.5 if self is BondOrder.AROMATIC else float(self.value)


_BOND_SYMBOLS = {
    "-": BondOrder.SINGLE,
    "=": BondOrder.DOUBLE,
    "#": BondOrder.TRIPLE,
    ":": BondOrder.AROMATIC,
}


class Atom(NamedTuple):
    symbol: str
    charge: int = 0
    aromatic: bool = False
    hydrogens: int | None = None  # explicit count from a bracket atom

    @property
    def atomic_number(self) -> int:
        return ELEMENTS.index(self.symbol) + 1


class Bond(NamedTuple):
    begin: int
    end: int
    order: BondOrder = BondOrder.SINGLE


@dataclass(frozen=True)
class MolecularGraph:
    """Heavy-atom graph with implicit hydrogens."""
    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]

    def __post_init__(self) -> None:
        n = len(self.atoms)
        if n == 0:
            raise InputError("molecular graph has no atoms")
        for atom in self.atoms:
            if atom.symbol not in _ELEMENT_SET:
                raise InputError(f"unknown element '{atom.symbol}'")
        seen: set[tuple[int, int]] = set()
        for bond in self.bonds:
            u, v = bond.begin, bond.end
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"bond ({u}, {v}) references a missing atom")
            if u == v:
                raise InputError(f"self-bond on atom {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InputError(f"duplicate bond between atoms {key[0]} and {key[1]}")
            seen.add(key)
        if not self._is_connected():
            raise InputError("molecular graph is disconnected")

    def _is_connected(self) -> bool:
        adjacency = self.adjacency()
        reached = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v, _ in adjacency[u]:
                if v not in reached:
                    reached.add(v)
                    queue.append(v)
        return len(reached) == len(self.atoms)

    def adjacency(self) -> list[list[tuple[int, BondOrder]]]:
        """Per-atom list of (neighbor index, bond order)."""
        adjacency: list[list[tuple[int, BondOrder]]] = [[] for _ in self.atoms]
        for bond in self.bonds:
            adjacency[bond.begin].append((bond.end, bond.order))
            adjacency[bond.end].append((bond.begin, bond.order))
        return adjacency

    def hydrogen_count(self, index: int, adjacency=None) -> int:
        """Attached hydrogens: explicit for bracket atoms, valence-filled otherwise."""
        atom = self.atoms[index]
        if atom.hydrogens is not None:
            return atom.hydrogens
        adjacency = adjacency if adjacency is not None else self.adjacency()
        bond_sum = int(sum(order.valence for _, order in adjacency[index]))
        for valence in STANDARD_VALENCES.get(atom.symbol, ()):
            if valence >= bond_sum:
                return valence - bond_sum
        return 0

    def permute(self, perm: Sequence[int]) -> "MolecularGraph":
        """Return the same molecule with atom i moved to position perm[i]."""
        if sorted(perm) != list(range(len(self.atoms))):
            raise ValueError("perm must be a permutation of atom indices")
        atoms: list[Atom | None] = [None] * len(self.atoms)
        for old, new in enumerate(perm):
            atoms[new] = self.atoms[old]
        bonds = tuple(Bond(perm[b.begin], perm[b.end], b.order) for b in self.bonds)
        return MolecularGraph(atoms=tuple(atoms), bonds=bonds)


def parse_smiles(text: str) -> MolecularGraph:
    """Parse a SMILES string in the supported subset into a MolecularGraph."""
    return _SmilesParser(text).parse()


class _SmilesParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.atoms: list[Atom] = []
        self.bonds: dict[tuple[int, int], Bond] = {}
        self.rings: dict[int, tuple[int, BondOrder | None, int]] = {}
        self.branches: list[tuple[int, int, int]] = []  # (atom, atom count at open, offset)
        self.prev: int | None = None
        self.pending: BondOrder | None = None

    # -- errors ------------------------------------------------------------

    def _syntax(self, message: str, offset: int | None = None) -> SmilesSyntaxError:
        return SmilesSyntaxError(message, self.pos if offset is None else offset, self.text)

    def _unsupported(self, feature: str, offset: int | None = None) -> UnsupportedSmilesError:
        return UnsupportedSmilesError(feature, self.pos if offset is None else offset, self.text)

    # -- main loop ---------------------------------------------------------

    def parse(self) -> MolecularGraph:
        text = self.text
        if not text:
            raise self._syntax("empty SMILES", 0)

        while self.pos < len(text):
            ch_pos = self.pos
            ch = text[ch_pos]
            if ch == "(":
                if self.prev is None:
                    raise self._syntax("branch before first atom")
                if self.pending is not None:
                    raise self._syntax("bond symbol before branch")
                self.branches.append((self.prev, len(self.atoms), ch_pos))
                self.pos += 1
            elif ch == ")":
                if not self.branches:
                    raise self._syntax("unmatched ')'")
                if self.pending is not None:
                    raise self._syntax("dangling bond symbol")
                anchor, count_at_open, _ = self.branches.pop()
                if len(self.atoms) == count_at_open:
                    raise self._syntax("empty branch")
                self.prev = anchor
                self.pos += 1
            elif ch in _BOND_SYMBOLS:
                if self.prev is None:
                    raise self._syntax("bond symbol before first atom")
                if self.pending is not None:
                    raise self._syntax("consecutive bond symbols")
                self.pending = _BOND_SYMBOLS[ch]
                self.pos += 1
            elif ch in "/\\":
                raise self._unsupported("directional bond (stereo)")
            elif ch == ".":
                raise self._unsupported("multi-fragment '.'")
            elif ch == "$":
                raise self._unsupported("quadruple bond")
            elif ch == "*":
                raise self._unsupported("wildcard atom")
            elif ch.isdigit() or ch == "%":
                self._ring_closure()
            elif ch == "[":
                self._bracket_atom()
            else:
                self._organic_atom()

        if self.pending is not None:
            raise self._syntax("dangling bond symbol", len(text) - 1)
        if self.branches:
            raise self._syntax("unclosed branch", self.branches[-1][2])
        if self.rings:
            number, (_, _, offset) = min(self.rings.items(), key=lambda kv: kv[1][2])
            raise self._syntax(f"unclosed ring {number}", offset)

        return MolecularGraph(atoms=tuple(self.atoms), bonds=tuple(self.bonds.values()))

    # -- atoms -------------------------------------------------------------

    def _add_atom(self, atom: Atom) -> None:
        index = len(self.atoms)
        self.atoms.append(atom)
        if self.prev is not None:
            order = self.pending or self._default_order(self.prev, index)
            self._add_bond(self.prev, index, order)
        self.pending = None
        self.prev = index

    def _organic_atom(self) -> None:
        text, pos = self.text, self.pos
        two = text[pos:pos + 2]
        if two in ("Cl", "Br"):
            self.pos += 2
            self._add_atom(Atom(two))
            return
        ch = text[pos]
        if ch in ORGANIC_SUBSET:
            self.pos += 1
            self._add_atom(Atom(ch))
        elif ch in AROMATIC_ORGANIC:
            self.pos += 1
            self._add_atom(Atom(AROMATIC_ORGANIC[ch], aromatic=True))
        elif ch.isalpha():
            raise self._syntax(f"element '{ch}' outside the organic subset must be bracketed")
        else:
            raise self._syntax(f"unexpected character '{ch}'")

    def _bracket_atom(self) -> None:
        text, start = self.text, self.pos
        close = text.find("]", start)
        if close == -1:
            raise self._syntax("unclosed bracket atom")
        body = text[start + 1:close]
        i = 0

        def at(offset: int) -> int:
            return start + 1 + offset

        if not body:
            raise self._syntax("empty bracket atom")
        if body[0].isdigit():
            raise self._unsupported("isotope", at(0))

        # element
        if body[:2] in AROMATIC_BRACKET:
            symbol, aromatic, i = AROMATIC_BRACKET[body[:2]], True, 2
        elif body[0] in AROMATIC_BRACKET:
            symbol, aromatic, i = AROMATIC_BRACKET[body[0]], True, 1
        elif body[0].isupper():
            if body[:2] in _ELEMENT_SET and len(body) > 1 and body[1].islower():
                symbol, i = body[:2], 2
            elif body[0] in _ELEMENT_SET:
                symbol, i = body[0], 1
            else:
                raise self._syntax(f"unknown element in '[{body}]'", at(0))
            aromatic = False
        elif body[0] == "*":
            raise self._unsupported("wildcard atom", at(0))
        else:
            raise self._syntax(f"unknown element in '[{body}]'", at(0))

        if symbol == "H":
            raise self._unsupported("explicit hydrogen atom", at(0))
        if i < len(body) and body[i] == "@":
            raise self._unsupported("stereo marker '@'", at(i))

        hydrogens = 0
        if i < len(body) and body[i] == "H":
            i += 1
            digits = ""
            while i < len(body) and body[i].isdigit():
                digits += body[i]
                i += 1
            hydrogens = int(digits) if digits else 1

        charge = 0
        if i < len(body) and body[i] in "+-":
            sign = 1 if body[i] == "+" else -1
            symbol_char = body[i]
            i += 1
            if i < len(body) and body[i].isdigit():
                digits = ""
                while i < len(body) and body[i].isdigit():
                    digits += body[i]
                    i += 1
                charge = sign * int(digits)
            else:
                count = 1
                while i < len(body) and body[i] == symbol_char:
                    count += 1
                    i += 1
                charge = sign * count

        if i < len(body):
            if body[i] == ":":
                raise self._unsupported("atom class", at(i))
            if body[i] == "@":
                raise self._unsupported("stereo marker '@'", at(i))
            raise self._syntax(f"unexpected '{body[i]}' in bracket atom", at(i))

        self.pos = close + 1
        self._add_atom(Atom(symbol, charge=charge, aromatic=aromatic, hydrogens=hydrogens))

    # -- bonds -------------------------------------------------------------

    def _default_order(self, u: int, v: int) -> BondOrder:
        if self.atoms[u].aromatic and self.atoms[v].aromatic:
            return BondOrder.AROMATIC
        return BondOrder.SINGLE

    def _add_bond(self, u: int, v: int, order: BondOrder, offset: int | None = None) -> None:
        key = (min(u, v), max(u, v))
        if key in self.bonds:
            raise self._syntax(f"duplicate bond between atoms {key[0]} and {key[1]}", offset)
        self.bonds[key] = Bond(u, v, order)

    def _ring_closure(self) -> None:
        text, offset = self.text, self.pos
        if text[offset] == "%":
            digits = text[offset + 1:offset + 3]
            if len(digits) != 2 or not digits.isdigit():
                raise self._syntax("'%' must be followed by two digits")
            number = int(digits)
            self.pos += 3
        else:
            number = int(text[offset])
            self.pos += 1
        if self.prev is None:
            raise self._syntax("ring closure before first atom", offset)

        bond = self.pending
        self.pending = None
        if number not in self.rings:
            self.rings[number] = (self.prev, bond, offset)
            return

        other, other_bond, _ = self.rings.pop(number)
        if other == self.prev:
            raise self._syntax(f"ring closure {number} bonds an atom to itself", offset)
        if bond is not None and other_bond is not None and bond != other_bond:
            raise self._syntax(f"conflicting bond symbols on ring closure {number}", offset)
        order = bond or other_bond or self._default_order(other, self.prev)
        self._add_bond(other, self.prev, order, offset)
