"""Values over the prime field Z_d"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np
from sympy import isprime

from app.utils.errors import DimensionMismatch, ModulusMismatch, NotPrime, ResourceCapExceeded

# Keeps every int64 product sum n·(d-1)² far below 2^63
MAX_MODULUS = 10 ** 4


@dataclass(frozen=True)
class Modulus:
    """A prime modulus d <= MAX_MODULUS, checked at construction."""

    d: int

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, (int, np.integer)):
            raise NotPrime(f"Modulus must be an integer, got {self.d!r}")
        if self.d < 2 or not isprime(int(self.d)):
            raise NotPrime(f"Modulus must be a prime >= 2, got {self.d}")
        if self.d > MAX_MODULUS:
            raise ResourceCapExceeded(f"Modulus {self.d} exceeds the supported maximum of {MAX_MODULUS}")
        object.__setattr__(self, 'd', int(self.d))

    def __int__(self):
        return self.d

    def __repr__(self):
        return f'Modulus({self.d})'

    def reduce(self, value: int) -> int:
        """Canonical residue of an integer in [0, d-1]."""
        return int(value) % self.d

    def inverse(self, value: int) -> int:
        """Multiplicative inverse of a nonzero residue."""
        return pow(int(value) % self.d, -1, self.d)


def _frozen_residues(modulus: Modulus, values, ndim: int) -> np.ndarray:
    array = np.array(values, dtype=np.int64)
    if array.ndim != ndim:
        raise DimensionMismatch(f"Expected a {ndim}-dimensional array, got shape {array.shape}")
    array = np.mod(array, modulus.d)
    array.setflags(write=False)
    return array


def _check_same_modulus(*values) -> Modulus:
    moduli = {v.modulus for v in values}
    if len(moduli) != 1:
        raise ModulusMismatch(f"Operands use different moduli: {sorted(m.d for m in moduli)}")
    return values[0].modulus


@dataclass(frozen=True, eq=False)
class FieldVector:
    """
    A vector over Z_d.

    Entries are normalized to canonical residues on construction, so the
    worked example's -1 is stored as d-1.
    """

    modulus: Modulus
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'entries', _frozen_residues(self.modulus, self.entries, 1))

    @classmethod
    def of(cls, modulus: Modulus, values: Iterable[int]) -> 'FieldVector':
        return cls(modulus, np.array(list(values), dtype=np.int64))

    @classmethod
    def zeros(cls, modulus: Modulus, length: int) -> 'FieldVector':
        return cls(modulus, np.zeros(length, dtype=np.int64))

    @classmethod
    def unit(cls, modulus: Modulus, length: int, index: int) -> 'FieldVector':
        """Standard basis vector with a 1 at 0-based position `index`."""
        values = np.zeros(length, dtype=np.int64)
        values[index] = 1
        return cls(modulus, values)

    def __len__(self):
        return int(self.entries.shape[0])

    def __getitem__(self, index):
        return int(self.entries[index])

    def __eq__(self, other):
        if not isinstance(other, FieldVector):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.modulus.d, tuple(self.to_list())))

    def __repr__(self):
        return f'FieldVector(d={self.modulus.d}, {self.to_list()})'

    def __add__(self, other: 'FieldVector') -> 'FieldVector':
        _check_same_modulus(self, other)
        if len(self) != len(other):
            raise DimensionMismatch(f"Cannot add vectors of length {len(self)} and {len(other)}")
        return FieldVector(self.modulus, self.entries + other.entries)

    def scale(self, factor: int) -> 'FieldVector':
        return FieldVector(self.modulus, self.entries * (int(factor) % self.modulus.d))

    def dot(self, other: 'FieldVector') -> int:
        _check_same_modulus(self, other)
        if len(self) != len(other):
            raise DimensionMismatch(f"Cannot dot vectors of length {len(self)} and {len(other)}")
        return int(np.dot(self.entries, other.entries) % self.modulus.d)

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def take(self, indices: Sequence[int]) -> 'FieldVector':
        return FieldVector(self.modulus, self.entries[list(indices)])

    def to_list(self) -> List[int]:
        return [int(x) for x in self.entries]


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    """A row-major matrix over Z_d."""

    modulus: Modulus
    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen_residues(self.modulus, self.entries, 2)
        if entries.shape[0] < 1 or entries.shape[1] < 1:
            raise DimensionMismatch(f"Matrix dimensions must be positive, got {entries.shape}")
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def from_rows(cls, modulus: Modulus, rows: Sequence[Sequence[int]]) -> 'FieldMatrix':
        """Build a matrix from nested lists; negative entries are reduced mod d."""
        widths = {len(row) for row in rows}
        if len(widths) != 1:
            raise DimensionMismatch("All matrix rows must have the same length")
        return cls(modulus, np.array(rows, dtype=np.int64))

    @classmethod
    def identity(cls, modulus: Modulus, n: int) -> 'FieldMatrix':
        return cls(modulus, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, modulus: Modulus, rows: int, cols: int) -> 'FieldMatrix':
        return cls(modulus, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def from_columns(cls, columns: Sequence[FieldVector]) -> 'FieldMatrix':
        modulus = _check_same_modulus(*columns)
        return cls(modulus, np.column_stack([c.entries for c in columns]))

    @classmethod
    def from_vectors(cls, vectors: Sequence[FieldVector]) -> 'FieldMatrix':
        """Stack vectors as rows."""
        modulus = _check_same_modulus(*vectors)
        if len({len(v) for v in vectors}) != 1:
            raise DimensionMismatch("Vectors must all have the same length")
        return cls(modulus, np.vstack([v.entries for v in vectors]))

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.modulus.d, self.entries.shape, self.entries.tobytes()))

    def __repr__(self):
        return f'FieldMatrix(d={self.modulus.d}, {self.rows}x{self.cols})'

    def transpose(self) -> 'FieldMatrix':
        return FieldMatrix(self.modulus, self.entries.T)

    def take_rows(self, indices: Sequence[int]) -> 'FieldMatrix':
        return FieldMatrix(self.modulus, self.entries[list(indices), :])

    def row(self, index: int) -> FieldVector:
        return FieldVector(self.modulus, self.entries[index, :])

    def column(self, index: int) -> FieldVector:
        return FieldVector(self.modulus, self.entries[:, index])

    def scalar_shift(self, value: int) -> 'FieldMatrix':
        """Return self - value * I (square matrices only)."""
        if not self.is_square:
            raise DimensionMismatch("scalar_shift needs a square matrix")
        return FieldMatrix(self.modulus, self.entries - int(value) * np.eye(self.rows, dtype=np.int64))

    def to_list(self) -> List[List[int]]:
        return [[int(x) for x in row] for row in self.entries]
