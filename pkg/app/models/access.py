"""Access structures and monotone span programs"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from app.models.field import FieldMatrix, FieldVector, Modulus
from app.utils.errors import DimensionMismatch

ParticipantSet = FrozenSet[int]

# Subset enumeration is exponential in m
MAX_PARTICIPANTS = 16


def participant_set(members: Iterable[int]) -> ParticipantSet:
    """Participants are 1-based indices P_1..P_m."""
    return frozenset(int(p) for p in members)


def format_set(members: Iterable[int]) -> str:
    ordered = sorted(members)
    return '{' + ','.join(f'P{p}' for p in ordered) + '}'


@dataclass(frozen=True)
class AccessStructure:
    """
    One Γ_i, stored by its minimal authorized sets.

    The monotone closure is implicit: a set is authorized when it
    contains one of the minimal sets.
    """

    minimal_sets: Tuple[ParticipantSet, ...]

    def __post_init__(self):
        sets = tuple(participant_set(s) for s in self.minimal_sets)
        for s in sets:
            if not s:
                raise ValueError("Minimal authorized sets must be nonempty")
            if any(p < 1 for p in s):
                raise ValueError(f"Participant indices start at 1, got {sorted(s)}")
        for i, a in enumerate(sets):
            for j, b in enumerate(sets):
                if i != j and a <= b:
                    raise ValueError(
                        f"Minimal sets must form an antichain: {format_set(a)} is contained in {format_set(b)}"
                    )
        object.__setattr__(self, 'minimal_sets', tuple(sorted(sets, key=lambda s: (len(s), sorted(s)))))

    @classmethod
    def of(cls, *sets: Iterable[int]) -> 'AccessStructure':
        return cls(tuple(participant_set(s) for s in sets))

    def participants(self) -> ParticipantSet:
        return frozenset().union(*self.minimal_sets)

    def to_list(self) -> List[List[int]]:
        return [sorted(s) for s in self.minimal_sets]


@dataclass(frozen=True)
class MultiAccessStructure:
    """Γ = (Γ_1, ..., Γ_n), one access structure per secret."""

    structures: Tuple[AccessStructure, ...]

    def __post_init__(self):
        if len(self.structures) < 1:
            raise ValueError("A multi-access structure needs at least one access structure")
        object.__setattr__(self, 'structures', tuple(self.structures))

    def __len__(self):
        return len(self.structures)

    def for_secret(self, i: int) -> AccessStructure:
        """Γ_i for a 1-based secret index."""
        if not 1 <= i <= len(self.structures):
            raise IndexError(f"Secret index {i} outside 1..{len(self.structures)}")
        return self.structures[i - 1]


@dataclass(frozen=True, eq=False)
class MspInstance:
    """
    A monotone span program (Z_d, M, ψ, ζ_1..ζ_n) with the structure it claims to realize.

    `row_owners[k]` is ψ(k+1), the participant owning row k (0-based rows).
    """

    modulus: Modulus
    m_matrix: FieldMatrix
    row_owners: Tuple[int, ...]
    structure: MultiAccessStructure
    targets: Tuple[FieldVector, ...] = field(default=())

    def __post_init__(self):
        if self.m_matrix.modulus != self.modulus:
            raise DimensionMismatch("MSP matrix must live over the MSP modulus")
        owners = tuple(int(o) for o in self.row_owners)
        if len(owners) != self.m_matrix.rows:
            raise DimensionMismatch(f"ψ assigns {len(owners)} rows but M has {self.m_matrix.rows}")
        if sorted(owners) != list(range(1, len(owners) + 1)):
            # One row per participant, as in ψ(k) = P_k
            raise ValueError("Row owners must be a bijection onto P_1..P_m")
        object.__setattr__(self, 'row_owners', owners)

        n = len(self.structure)
        if n > self.m_matrix.cols:
            raise DimensionMismatch(f"{n} secrets need at least {n} columns, M has {self.m_matrix.cols}")
        standard = tuple(FieldVector.unit(self.modulus, self.m_matrix.cols, i) for i in range(n))
        if not self.targets:
            object.__setattr__(self, 'targets', standard)
        elif tuple(self.targets) != standard:
            raise ValueError("Target vector ζ_i must be the i-th standard basis vector")
        else:
            object.__setattr__(self, 'targets', tuple(self.targets))

        omega = self.participants()
        for i, gamma in enumerate(self.structure.structures, start=1):
            stray = gamma.participants() - omega
            if stray:
                raise ValueError(f"Γ_{i} names unknown participants {format_set(stray)}")

    @property
    def n_secrets(self) -> int:
        return len(self.structure)

    @property
    def m(self) -> int:
        return self.m_matrix.rows

    @property
    def l(self) -> int:  # noqa: E743
        return self.m_matrix.cols

    def participants(self) -> ParticipantSet:
        return frozenset(self.row_owners)

    def target(self, i: int) -> FieldVector:
        return self.targets[i - 1]

    def rows_for(self, members: Iterable[int]) -> List[int]:
        """0-based rows of M owned by the given participants, ascending."""
        wanted = participant_set(members)
        return [k for k, owner in enumerate(self.row_owners) if owner in wanted]

    def owner_to_row(self) -> Dict[int, int]:
        return {owner: k for k, owner in enumerate(self.row_owners)}


@dataclass(frozen=True)
class ValidationFailure:
    """One failed MSP condition for (secret i, participant set A)."""

    secret_index: int
    participants: ParticipantSet
    condition: int
    message: str

    def to_dict(self):
        return {
            'secret': self.secret_index,
            'set': sorted(self.participants),
            'condition': self.condition,
            'message': self.message
        }


@dataclass
class ValidationReport:
    """Outcome of checking both MSP conditions across the whole structure."""

    failures: List[ValidationFailure] = field(default_factory=list)
    checked_authorized: int = 0
    checked_unauthorized: int = 0

    @property
    def is_valid(self) -> bool:
        return not self.failures

    def failures_for(self, condition: int) -> List[ValidationFailure]:
        return [f for f in self.failures if f.condition == condition]

    @property
    def reconstructs(self) -> bool:
        """Every authorized set reaches its target, whatever condition (2) says."""
        return not self.failures_for(1)

    def privacy_gaps(self) -> List[Tuple[int, ParticipantSet]]:
        """(secret, set) pairs where an unauthorized set can still compute the secret."""
        return [(f.secret_index, f.participants) for f in self.failures_for(2)]

    def to_dict(self):
        return {
            'valid': self.is_valid,
            'checked_authorized': self.checked_authorized,
            'checked_unauthorized': self.checked_unauthorized,
            'failures': [f.to_dict() for f in self.failures]
        }

    def format_lines(self) -> List[str]:
        lines = [
            f"authorized sets checked: {self.checked_authorized}",
            f"maximal unauthorized sets checked: {self.checked_unauthorized}",
        ]
        if self.is_valid:
            lines.append("MSP is valid")
        for failure in self.failures:
            lines.append(
                f"FAIL secret {failure.secret_index} set {format_set(failure.participants)} "
                f"condition ({failure.condition}): {failure.message}"
            )
        return lines


def sorted_sets(sets: Sequence[ParticipantSet]) -> List[ParticipantSet]:
    return sorted(sets, key=lambda s: (len(s), sorted(s)))
