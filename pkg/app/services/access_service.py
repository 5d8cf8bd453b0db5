"""
Access structure service.

Authorization checks, recombination vectors and the two conditions a
monotone span program must satisfy for every secret it shares.
"""
import logging
from itertools import combinations
from typing import Iterable, List, Sequence

from app.models.access import (
    MAX_PARTICIPANTS, AccessStructure, MspInstance, ParticipantSet, ValidationFailure,
    ValidationReport, format_set, participant_set, sorted_sets
)
from app.models.field import FieldMatrix, FieldVector, Modulus
from app.services.finite_field import FieldAlgebra
from app.utils.errors import NoSolution, NotAuthorized, TooManyParticipants

logger = logging.getLogger(__name__)


class AccessService:
    """Service for access structures and MSP validation"""

    MAX_PARTICIPANTS = MAX_PARTICIPANTS

    @staticmethod
    def is_authorized(gamma_i: AccessStructure, members: Iterable[int]) -> bool:
        """True iff some minimal set of gamma_i is contained in members."""
        s = participant_set(members)
        return any(minimal <= s for minimal in gamma_i.minimal_sets)

    @staticmethod
    def _restricted_matrix(msp: MspInstance, members: Iterable[int]) -> FieldMatrix:
        rows = msp.rows_for(members)
        if not rows:
            raise NoSolution("An empty participant set owns no rows of M")
        return msp.m_matrix.take_rows(rows)

    @staticmethod
    def recombination_vector(msp: MspInstance, i: int, members: Iterable[int]) -> FieldVector:
        """
        Canonical λ_{iA} with M_A^T λ = ζ_i.

        Args:
            msp: The span program
            i: 1-based secret index
            members: An authorized set A for Γ_i

        Returns:
            λ indexed by the rows of M_A in ascending row order

        Raises:
            NotAuthorized: A is not authorized for Γ_i
            NoSolution: the MSP does not realize Γ_i on A
        """
        a = participant_set(members)
        if not AccessService.is_authorized(msp.structure.for_secret(i), a):
            raise NotAuthorized(f"{format_set(a)} is not authorized for secret {i}")
        m_a = AccessService._restricted_matrix(msp, a)
        return FieldAlgebra.solve_linear(m_a.transpose(), msp.target(i))

    @staticmethod
    def maximal_unauthorized_sets(
        gamma_i: AccessStructure,
        omega: Iterable[int],
        max_participants: int = MAX_PARTICIPANTS
    ) -> List[ParticipantSet]:
        """
        Maximal elements of Δ_i = 2^Ω minus the closure of Γ_i.

        Brute force over every subset of Ω, so Ω is capped.

        Raises:
            TooManyParticipants: |Ω| exceeds max_participants
        """
        universe = sorted(participant_set(omega))
        if len(universe) > max_participants:
            raise TooManyParticipants(
                f"Enumerating {len(universe)} participants exceeds the cap of {max_participants}"
            )
        found = []
        for size in range(len(universe), -1, -1):
            for combo in combinations(universe, size):
                s = frozenset(combo)
                if AccessService.is_authorized(gamma_i, s):
                    continue
                if all(AccessService.is_authorized(gamma_i, s | {p}) for p in universe if p not in s):
                    found.append(s)
        return sorted_sets(found)

    @staticmethod
    def condition_two_witness(msp: MspInstance, i: int, members: Iterable[int]) -> FieldVector:
        """
        Find κ with M_A κ = 0 and κ_i = 1.

        Coordinate i is pinned by appending the row e_i^T with right-hand
        side 1 to the homogeneous system.

        Raises:
            NoSolution: no such κ exists, so A could learn s_i
        """
        a = participant_set(members)
        pin = FieldVector.unit(msp.modulus, msp.l, i - 1)
        rows = [msp.m_matrix.row(k) for k in msp.rows_for(a)] + [pin]
        rhs = FieldVector.unit(msp.modulus, len(rows), len(rows) - 1)
        return FieldAlgebra.solve_linear(FieldMatrix.from_vectors(rows), rhs)

    @staticmethod
    def validate_msp(msp: MspInstance, max_participants: int = MAX_PARTICIPANTS) -> ValidationReport:
        """
        Check both span program conditions for every secret.

        Condition (1) runs on each minimal authorized set, condition (2)
        on each maximal unauthorized set. Failures are collected, never
        raised.

        Returns:
            ValidationReport listing every failing (i, A)
        """
        report = ValidationReport()
        omega = msp.participants()
        for i, gamma in enumerate(msp.structure.structures, start=1):
            for a in gamma.minimal_sets:
                report.checked_authorized += 1
                try:
                    m_a = AccessService._restricted_matrix(msp, a)
                    FieldAlgebra.solve_linear(m_a.transpose(), msp.target(i))
                except NoSolution:
                    report.failures.append(ValidationFailure(
                        i, a, 1, "ζ_i is not in the row span of M_A"
                    ))

            for a in AccessService.maximal_unauthorized_sets(gamma, omega, max_participants):
                report.checked_unauthorized += 1
                try:
                    AccessService.condition_two_witness(msp, i, a)
                except NoSolution:
                    report.failures.append(ValidationFailure(
                        i, a, 2, "no κ with M_A κ = 0 and κ_i = 1"
                    ))

        if report.is_valid:
            logger.info(f"MSP over Z_{msp.modulus.d} with {msp.m} participants is valid for {msp.n_secrets} secret(s)")
        else:
            logger.warning(f"MSP validation found {len(report.failures)} failure(s)")
        return report

    @staticmethod
    def realized_structure(
        modulus: Modulus,
        matrix: FieldMatrix,
        row_owners: Sequence[int],
        i: int,
        max_participants: int = MAX_PARTICIPANTS
    ) -> AccessStructure:
        """
        Derive the minimal authorized sets a span program matrix realizes for secret i.

        A set is authorized when ζ_i lies in the row span of its rows.

        Args:
            modulus: Field of the matrix
            matrix: M, one row per participant
            row_owners: ψ as a sequence, row k owned by row_owners[k]
            i: 1-based secret index
            max_participants: Enumeration cap

        Returns:
            AccessStructure of the minimal authorized sets (possibly empty)
        """
        universe = sorted(set(int(o) for o in row_owners))
        if len(universe) > max_participants:
            raise TooManyParticipants(
                f"Enumerating {len(universe)} participants exceeds the cap of {max_participants}"
            )
        target = FieldVector.unit(modulus, matrix.cols, i - 1)
        minimal: List[ParticipantSet] = []
        for size in range(1, len(universe) + 1):
            for combo in combinations(universe, size):
                s = frozenset(combo)
                if any(m <= s for m in minimal):
                    continue
                rows = [k for k, owner in enumerate(row_owners) if owner in s]
                try:
                    FieldAlgebra.solve_linear(matrix.take_rows(rows).transpose(), target)
                except NoSolution:
                    continue
                minimal.append(s)
        return AccessStructure(tuple(minimal))
