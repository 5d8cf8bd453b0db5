"""Black box credentials, state and verdicts"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from app.models.field import FieldMatrix, FieldVector, Modulus
from app.utils.errors import DimensionMismatch, ModulusMismatch


@dataclass(frozen=True)
class ShadowPair:
    """
    A participant's shadow credentials (y_k1, y_k2).

    Issued pairs are nonzero and linearly independent; submitted pairs
    may be anything, which is what the verifier is for.
    """

    y1: FieldVector
    y2: FieldVector

    def __post_init__(self):
        if self.y1.modulus != self.y2.modulus:
            raise ModulusMismatch("Shadow vectors use different moduli")
        if len(self.y1) != len(self.y2):
            raise DimensionMismatch("Shadow vectors must have the same length")

    def __len__(self):
        return len(self.y1)

    def to_list(self) -> List[List[int]]:
        return [self.y1.to_list(), self.y2.to_list()]


@dataclass(frozen=True)
class BlackBoxState:
    """
    What the Black box keeps after distribution: the shares and X = Y^-1 Σ Y.

    Σ and Y are discarded once X is formed.
    """

    modulus: Modulus
    row_owners: Tuple[int, ...]
    stored_shares: FieldVector
    x_matrix: FieldMatrix

    def __post_init__(self):
        m = len(self.stored_shares)
        if len(self.row_owners) != m:
            raise DimensionMismatch("One owner per stored share is required")
        if self.x_matrix.rows != 2 * m or not self.x_matrix.is_square:
            raise DimensionMismatch(f"X must be {2 * m}x{2 * m}")

    @property
    def m(self) -> int:
        return len(self.stored_shares)

    def share_of(self, participant: int) -> int:
        return self.stored_shares[self.row_owners.index(participant)]


class CheatReason(Enum):
    DEPENDENT_SHADOWS = 'dependent_shadows'
    EIGENVALUE_MISMATCH = 'eigenvalue_mismatch'
    NOT_EIGENVECTOR = 'not_eigenvector'


@dataclass(frozen=True)
class ShadowVerdict:
    """Accept(sh_k) when `reason` is None, otherwise Reject(reason)."""

    participant: int
    share: Optional[int] = None
    reason: Optional[CheatReason] = None

    @property
    def accepted(self) -> bool:
        return self.reason is None

    def to_dict(self):
        if self.accepted:
            return {'participant': self.participant, 'verdict': 'honest'}
        return {'participant': self.participant, 'verdict': 'cheater', 'reason': self.reason.value}


@dataclass(frozen=True)
class CheatReport:
    """Per-participant verdicts and whether the honest remainder lost authorization."""

    verdicts: Tuple[ShadowVerdict, ...]
    aborted: bool

    def honest(self) -> Tuple[int, ...]:
        return tuple(v.participant for v in self.verdicts if v.accepted)

    def cheaters(self) -> Dict[int, CheatReason]:
        return {v.participant: v.reason for v in self.verdicts if not v.accepted}

    def to_dict(self):
        return {
            'verdicts': [v.to_dict() for v in self.verdicts],
            'aborted': self.aborted
        }
