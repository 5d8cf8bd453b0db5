"""
Black box service.

The dealer hides the shares as eigenvalues of X = Y^-1 Σ Y with
Σ = diag(sh_1, sh_1, ..., sh_m, sh_m). Each participant receives two
eigenvectors of X as shadows and later proves possession of a share by
handing them back.
"""
import logging
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from app.models.access import AccessStructure, format_set
from app.models.blackbox import BlackBoxState, CheatReason, CheatReport, ShadowPair, ShadowVerdict
from app.models.field import FieldMatrix, FieldVector, Modulus
from app.models.sharing import ShareBundle
from app.services.access_service import AccessService
from app.services.finite_field import FieldAlgebra
from app.utils.errors import DimensionMismatch, NotEigenvector

logger = logging.getLogger(__name__)


class BlackBoxService:
    """Service for issuing and verifying shadow credentials"""

    @staticmethod
    def sigma_matrix(bundle: ShareBundle) -> FieldMatrix:
        """Σ = diag(sh_1, sh_1, ..., sh_m, sh_m)."""
        doubled = np.repeat(bundle.shares.entries, 2)
        return FieldMatrix(bundle.modulus, np.diag(doubled))

    @staticmethod
    def build(
        bundle: ShareBundle,
        rng: np.random.Generator,
        row_owners: Optional[Sequence[int]] = None,
        y_override: Optional[FieldMatrix] = None,
        max_attempts: int = FieldAlgebra.DEFAULT_MAX_ATTEMPTS
    ) -> Tuple[BlackBoxState, Dict[int, ShadowPair]]:
        """
        Form X and issue one shadow pair per participant.

        The pair for row k is (Y^-1 e_{2k-1}, Y^-1 e_{2k}), two columns of
        Y^-1, which are eigenvectors of X for sh_k and independent even
        when two participants hold equal shares.

        Args:
            bundle: Shares to hide
            rng: Generator for Y
            row_owners: Participant owning each share (default P_1..P_m)
            y_override: Fixed invertible Y instead of a sampled one
            max_attempts: Rejection cap for sampling Y

        Returns:
            Tuple of (state, participant -> ShadowPair)
        """
        m = bundle.m
        if m < 1:
            raise DimensionMismatch("The Black box needs at least one share")
        owners = tuple(row_owners) if row_owners is not None else tuple(range(1, m + 1))

        if y_override is None:
            y = FieldAlgebra.random_invertible(bundle.modulus, 2 * m, rng, max_attempts)
        else:
            if y_override.rows != 2 * m or not y_override.is_square:
                raise DimensionMismatch(f"Y must be {2 * m}x{2 * m}")
            y = y_override

        y_inv = FieldAlgebra.mat_inverse(y)
        x = FieldAlgebra.mat_mul(FieldAlgebra.mat_mul(y_inv, BlackBoxService.sigma_matrix(bundle)), y)

        shadows = {
            owner: ShadowPair(y_inv.column(2 * k), y_inv.column(2 * k + 1))
            for k, owner in enumerate(owners)
        }
        logger.debug(f"Black box built for {m} participants, X is {2 * m}x{2 * m}")
        return BlackBoxState(bundle.modulus, owners, bundle.shares, x), shadows

    @staticmethod
    def verify_shadows(state: BlackBoxState, participant: int, pair: ShadowPair) -> ShadowVerdict:
        """
        Check a submitted pair against the stored share of `participant`.

        Checks run in order (independence, then y1, then y2) and the
        first failure is the verdict.
        """
        if len(pair) != 2 * state.m:
            raise DimensionMismatch(f"Shadows must have length {2 * state.m}, got {len(pair)}")
        if participant not in state.row_owners:
            raise ValueError(f"P{participant} holds no share in this Black box")
        expected = state.share_of(participant)

        if not FieldAlgebra.is_linearly_independent([pair.y1, pair.y2]):
            return ShadowVerdict(participant, reason=CheatReason.DEPENDENT_SHADOWS)
        for y in (pair.y1, pair.y2):
            try:
                eigenvalue = FieldAlgebra.eigenvalue_for_vector(state.x_matrix, y)
            except NotEigenvector:
                return ShadowVerdict(participant, reason=CheatReason.NOT_EIGENVECTOR)
            if eigenvalue != expected:
                return ShadowVerdict(participant, reason=CheatReason.EIGENVALUE_MISMATCH)
        return ShadowVerdict(participant, share=expected)

    @staticmethod
    def identify_and_release(
        state: BlackBoxState,
        submissions: Mapping[int, ShadowPair],
        gamma_i: AccessStructure
    ) -> Tuple[CheatReport, Optional[Dict[int, int]]]:
        """
        Verify every submission, drop cheaters and gate the release on Γ_i.

        Args:
            state: Black box state from build
            submissions: participant -> submitted pair
            gamma_i: Access structure of the requested secret

        Returns:
            Tuple of (report, participant -> share), the mapping being None
            when the honest remainder is not authorized
        """
        verdicts = tuple(
            BlackBoxService.verify_shadows(state, p, submissions[p]) for p in sorted(submissions)
        )
        honest = [v.participant for v in verdicts if v.accepted]
        for v in verdicts:
            if not v.accepted:
                logger.warning(f"P{v.participant} eliminated: {v.reason.value}")

        if not AccessService.is_authorized(gamma_i, honest):
            logger.warning(f"Honest set {format_set(honest)} is not authorized, no shares released")
            return CheatReport(verdicts, aborted=True), None

        released = {v.participant: v.share for v in verdicts if v.accepted}
        return CheatReport(verdicts, aborted=False), released

    @staticmethod
    def random_forged_pair(modulus: Modulus, m: int, rng: np.random.Generator) -> ShadowPair:
        """Two uniformly random vectors of length 2m, a blind forgery."""
        entries = rng.integers(0, modulus.d, size=(2, 2 * m), dtype=np.int64)
        return ShadowPair(FieldVector(modulus, entries[0]), FieldVector(modulus, entries[1]))

