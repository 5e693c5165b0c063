"""
Binary relations over integer values.

A relation is evaluated on the *values* of its two variables (x first, y second).
Networks never evaluate relations in their search loops: they compile each
relation once into an index-level table (see ``compile_table``).
"""
import operator
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


COMPARATORS = {
    "eq": operator.eq,
    "ne": operator.ne,
    "lt": operator.lt,
    "le": operator.le,
    "gt": operator.gt,
    "ge": operator.ge,
}

GRID_COMPARATORS = {
    "eq": np.equal,
    "ne": np.not_equal,
    "lt": np.less,
    "le": np.less_equal,
    "gt": np.greater,
    "ge": np.greater_equal,
}

# op applied to (y - x) equals MIRRORED[op] applied to (x - y) negated
MIRRORED = {"eq": "eq", "ne": "ne", "lt": "gt", "le": "ge", "gt": "lt", "ge": "le"}

SYMBOLS = {"eq": "==", "ne": "!=", "lt": "<", "le": "<=", "gt": ">", "ge": ">="}


@dataclass(frozen=True)
class Atom:
    """``(x - y) op k``, or ``|x - y| op k`` when ``absolute`` is set."""

    op: str
    k: int = 0
    absolute: bool = False

    def __post_init__(self):
        if self.op not in COMPARATORS:
            raise ValueError(f"Unknown comparison operator: {self.op}")

    def evaluate(self, a: int, b: int) -> bool:
        diff = a - b
        if self.absolute:
            diff = abs(diff)
        return COMPARATORS[self.op](diff, self.k)

    def grid(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        diff = np.subtract.outer(xs, ys)
        if self.absolute:
            diff = np.abs(diff)
        return GRID_COMPARATORS[self.op](diff, self.k)

    def swapped(self) -> "Atom":
        if self.absolute:
            return self
        return Atom(MIRRORED[self.op], -self.k, False)

    def describe(self) -> str:
        lhs = "|x - y|" if self.absolute else "x - y"
        if not self.absolute and self.k == 0:
            return f"x {SYMBOLS[self.op]} y"
        return f"{lhs} {SYMBOLS[self.op]} {self.k}"


@dataclass(frozen=True)
class IntensionalRelation:
    """Conjunction of atoms over two variable values."""

    atoms: tuple

    def evaluate(self, a: int, b: int) -> bool:
        return all(atom.evaluate(a, b) for atom in self.atoms)

    def grid(self, xs: Sequence[int], ys: Sequence[int]) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        table = np.ones((len(xs), len(ys)), dtype=bool)
        for atom in self.atoms:
            table &= atom.grid(xs, ys)
        return table

    def swapped(self) -> "IntensionalRelation":
        return IntensionalRelation(tuple(atom.swapped() for atom in self.atoms))

    def describe(self) -> str:
        return " and ".join(atom.describe() for atom in self.atoms)


@dataclass(frozen=True)
class ExtensionalRelation:
    """Set of allowed (``allowed=True``, supports) or forbidden (conflicts) pairs."""

    pairs: frozenset
    allowed: bool = True

    def evaluate(self, a: int, b: int) -> bool:
        return ((a, b) in self.pairs) == self.allowed

    def grid(self, xs: Sequence[int], ys: Sequence[int]) -> np.ndarray:
        table = np.full((len(xs), len(ys)), not self.allowed, dtype=bool)
        position_x = {v: i for i, v in enumerate(xs)}
        position_y = {v: i for i, v in enumerate(ys)}
        for a, b in self.pairs:
            i = position_x.get(a)
            j = position_y.get(b)
            if i is not None and j is not None:
                table[i, j] = self.allowed
        return table

    def swapped(self) -> "ExtensionalRelation":
        return ExtensionalRelation(frozenset((b, a) for a, b in self.pairs), self.allowed)

    def describe(self) -> str:
        semantics = "supports" if self.allowed else "conflicts"
        return f"{semantics}({len(self.pairs)})"


def compare(op: str, k: int = 0) -> IntensionalRelation:
    """``x op y + k``."""
    return IntensionalRelation((Atom(op, k),))


def distance(op: str, k: int) -> IntensionalRelation:
    """``|x - y| op k`` (RLFAP style)."""
    return IntensionalRelation((Atom(op, k, absolute=True),))


def conjunction(*relations: IntensionalRelation) -> IntensionalRelation:
    atoms = []
    for relation in relations:
        atoms.extend(relation.atoms)
    return IntensionalRelation(tuple(atoms))


def supports(pairs: Iterable) -> ExtensionalRelation:
    return ExtensionalRelation(frozenset(tuple(p) for p in pairs), allowed=True)


def conflicts(pairs: Iterable) -> ExtensionalRelation:
    return ExtensionalRelation(frozenset(tuple(p) for p in pairs), allowed=False)


class DenseTable:
    """Bit matrix over value indices; rows are kept as tuples for O(1) checks."""

    __slots__ = ("matrix", "rows")

    def __init__(self, matrix: np.ndarray):
        self.matrix = matrix
        self.rows = tuple(tuple(row) for row in matrix.tolist())

    def allows(self, a: int, b: int) -> bool:
        return self.rows[a][b]

    def transposed(self) -> "DenseTable":
        return DenseTable(self.matrix.T.copy())

    def count(self) -> int:
        return int(self.matrix.sum())


class PairTable:
    """Hashed set of allowed index pairs, for sparse relations."""

    __slots__ = ("pairs",)

    def __init__(self, pairs: frozenset):
        self.pairs = pairs

    def allows(self, a: int, b: int) -> bool:
        return (a, b) in self.pairs

    def transposed(self) -> "PairTable":
        return PairTable(frozenset((b, a) for a, b in self.pairs))

    def count(self) -> int:
        return len(self.pairs)


def compile_table(relation, xs: Sequence[int], ys: Sequence[int], dense_ratio: float = 0.5):
    """Index-level table of ``relation`` over domains ``xs`` and ``ys``."""
    matrix = relation.grid(xs, ys)
    if isinstance(relation, ExtensionalRelation):
        allowed = int(matrix.sum())
        if allowed < dense_ratio * matrix.size:
            rows, cols = np.nonzero(matrix)
            return PairTable(frozenset(zip(rows.tolist(), cols.tolist())))
    return DenseTable(matrix)
