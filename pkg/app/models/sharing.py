"""Secrets and the shares the dealer derives from them"""

from dataclasses import dataclass
from typing import Iterable, List, Tuple

from app.models.field import FieldVector, Modulus


@dataclass(frozen=True)
class SecretVector:
    """The n secrets s_1..s_n, one field element each."""

    modulus: Modulus
    secrets: Tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(s) for s in self.secrets)
        if not values:
            raise ValueError("At least one secret is required")
        for s in values:
            if not 0 <= s < self.modulus.d:
                raise ValueError(f"Secret {s} is outside Z_{self.modulus.d}")
        object.__setattr__(self, 'secrets', values)

    @classmethod
    def of(cls, modulus: Modulus, values: Iterable[int]) -> 'SecretVector':
        return cls(modulus, tuple(values))

    def __len__(self):
        return len(self.secrets)

    def secret(self, i: int) -> int:
        """s_i for a 1-based index."""
        return self.secrets[i - 1]


@dataclass(frozen=True)
class ShareBundle:
    """
    Shares sh = M ρ together with the dealer's ρ.

    `shares[k]` belongs to the owner of row k. ρ never leaves the dealer;
    transcripts only carry the shares.
    """

    modulus: Modulus
    shares: FieldVector
    rho: FieldVector

    @property
    def m(self) -> int:
        return len(self.shares)

    def share_of_row(self, row: int) -> int:
        return self.shares[row]

    def to_list(self) -> List[int]:
        return self.shares.to_list()
