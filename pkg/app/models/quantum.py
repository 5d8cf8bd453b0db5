"""Qudit registers, density matrices and noise channels"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from app.models.field import Modulus
from app.utils.errors import DimensionMismatch, ResourceCapExceeded

STATE_VECTOR_CAP = 2 ** 20
DENSITY_MATRIX_CAP = 512
NORM_TOLERANCE = 1e-9


def _register_size(d: int, t: int, cap: int) -> int:
    Modulus(d)
    if t < 1:
        raise DimensionMismatch(f"A register needs at least one qudit, got t={t}")
    size = d ** t
    if size > cap:
        raise ResourceCapExceeded(f"d^t = {d}^{t} = {size} exceeds the cap of {cap}")
    return size


def _frozen_complex(values, shape: Tuple[int, ...]) -> np.ndarray:
    array = np.array(values, dtype=np.complex128)
    if array.shape != shape:
        raise DimensionMismatch(f"Expected shape {shape}, got {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class QuditRegister:
    """
    A pure state of t qudits of dimension d.

    Basis index digits are read with wire 1 as the most significant
    digit, so |x_1 x_2 ... x_t> sits at index sum x_j d^(t-j).
    """

    d: int
    t: int
    amplitudes: np.ndarray

    def __post_init__(self):
        size = _register_size(self.d, self.t, STATE_VECTOR_CAP)
        amplitudes = _frozen_complex(self.amplitudes, (size,))
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"Register is not normalized: squared norm {norm}")
        object.__setattr__(self, 'amplitudes', amplitudes)

    @classmethod
    def basis(cls, d: int, t: int, digits: Sequence[int]) -> 'QuditRegister':
        """The computational basis state |digits>."""
        if len(digits) != t:
            raise DimensionMismatch(f"Expected {t} digits, got {len(digits)}")
        if any(not 0 <= x < d for x in digits):
            raise ValueError(f"Basis digits must lie in [0, {d - 1}]")
        size = _register_size(d, t, STATE_VECTOR_CAP)
        amplitudes = np.zeros(size, dtype=np.complex128)
        amplitudes[int(np.ravel_multi_index(tuple(digits), (d,) * t))] = 1.0
        return cls(d, t, amplitudes)

    @classmethod
    def zeros(cls, d: int, t: int) -> 'QuditRegister':
        return cls.basis(d, t, [0] * t)

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.d,) * self.t

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.shape)

    def digits_of(self, index: int) -> Tuple[int, ...]:
        return tuple(int(x) for x in np.unravel_index(index, self.shape))

    def support(self, threshold: float = 1e-10) -> List[Tuple[int, ...]]:
        """Basis tuples whose amplitude magnitude exceeds threshold."""
        return [self.digits_of(int(i)) for i in np.nonzero(np.abs(self.amplitudes) > threshold)[0]]

    def to_triples(self, threshold: float = 1e-10) -> List[Tuple[int, float, float]]:
        """(basis index, re, im) for every amplitude above threshold."""
        return [
            (int(i), float(self.amplitudes[i].real), float(self.amplitudes[i].imag))
            for i in np.nonzero(np.abs(self.amplitudes) > threshold)[0]
        ]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    A dense d^t x d^t operator on t qudits.

    Hermiticity is checked on construction. The trace is not forced to 1
    because correlated noise on several wires is not trace preserving.
    """

    d: int
    t: int
    entries: np.ndarray

    def __post_init__(self):
        size = _register_size(self.d, self.t, DENSITY_MATRIX_CAP)
        entries = _frozen_complex(self.entries, (size, size))
        if not np.allclose(entries, entries.conj().T, atol=NORM_TOLERANCE):
            raise ValueError("Density matrix is not Hermitian")
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def from_pure(cls, register: QuditRegister) -> 'DensityMatrix':
        psi = register.amplitudes
        return cls(register.d, register.t, np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, d: int, t: int) -> 'DensityMatrix':
        size = _register_size(d, t, DENSITY_MATRIX_CAP)
        return cls(d, t, np.eye(size, dtype=np.complex128) / size)

    def trace(self) -> float:
        return float(np.trace(self.entries).real)


class ChannelKind(Enum):
    DIT_FLIP = 'df'
    D_PHASE_FLIP = 'dpf'
    AMPLITUDE_DAMPING = 'ad'


@dataclass(frozen=True)
class KrausChannel:
    """A single-qudit noise channel with strength mu in [0, 1]."""

    kind: ChannelKind
    mu: float
    d: int

    def __post_init__(self):
        object.__setattr__(self, 'kind', ChannelKind(self.kind))
        Modulus(self.d)
        if not 0.0 <= float(self.mu) <= 1.0:
            raise ValueError(f"Noise parameter mu must lie in [0, 1], got {self.mu}")
        object.__setattr__(self, 'mu', float(self.mu))
