"""
Linear multi-secret sharing service.

One random vector ρ carries all n secrets in its leading coordinates and
a single matrix product turns it into every participant's share.
"""
import logging
from typing import Iterable, Optional, Tuple

import numpy as np

from app.models.access import MspInstance, format_set, participant_set
from app.models.field import FieldVector
from app.models.sharing import SecretVector, ShareBundle
from app.services.access_service import AccessService
from app.services.finite_field import FieldAlgebra
from app.utils.errors import DimensionMismatch, ModulusMismatch

logger = logging.getLogger(__name__)


class LmssService:
    """Service for distributing and reconstructing secrets classically"""

    @staticmethod
    def distribute(
        msp: MspInstance,
        secrets: SecretVector,
        rng: np.random.Generator,
        rho_tail: Optional[FieldVector] = None
    ) -> ShareBundle:
        """
        Compute sh = M ρ with ρ = (s_1..s_n, ρ_{n+1}..ρ_l).

        Args:
            msp: Span program whose matrix produces the shares
            secrets: The n secrets
            rng: Generator for the random tail of ρ
            rho_tail: Fixed tail replacing the random one (reproduces a
                known run exactly); the generator is not consumed when given

        Returns:
            ShareBundle with the shares and the dealer's ρ
        """
        if secrets.modulus != msp.modulus:
            raise ModulusMismatch("Secrets and MSP use different moduli")
        n, l = msp.n_secrets, msp.l
        if len(secrets) != n:
            raise DimensionMismatch(f"MSP shares {n} secret(s), got {len(secrets)}")

        if rho_tail is None:
            tail = rng.integers(0, msp.modulus.d, size=l - n, dtype=np.int64)
        else:
            if len(rho_tail) != l - n:
                raise DimensionMismatch(f"ρ tail must have length {l - n}, got {len(rho_tail)}")
            tail = rho_tail.entries

        rho = FieldVector(msp.modulus, np.concatenate([np.array(secrets.secrets, dtype=np.int64), tail]))
        shares = FieldAlgebra.mat_vec(msp.m_matrix, rho)
        logger.debug(f"Distributed {n} secret(s) to {msp.m} participants over Z_{msp.modulus.d}")
        return ShareBundle(msp.modulus, shares, rho)

    @staticmethod
    def reconstruct_classical(shares_a: FieldVector, lam: FieldVector) -> int:
        """Return Σ_k shares_a[k]·λ[k] mod d."""
        return shares_a.dot(lam)

    @staticmethod
    def restricted_shares(msp: MspInstance, bundle: ShareBundle, members: Iterable[int]) -> FieldVector:
        """sh_A, ordered like the rows of M_A."""
        return bundle.shares.take(msp.rows_for(members))

    @staticmethod
    def privacy_witness(
        msp: MspInstance,
        i: int,
        members: Iterable[int],
        bundle: ShareBundle,
        shift: int = 1
    ) -> Tuple[FieldVector, FieldVector]:
        """
        Two dealer vectors an unauthorized set cannot tell apart.

        ρ' = ρ + shift·κ where κ comes from condition (2), so M_A ρ' = M_A ρ
        while s_i moves by shift.

        Args:
            msp: Span program
            i: 1-based secret index
            members: An unauthorized set for Γ_i
            bundle: The dealt bundle supplying ρ
            shift: Nonzero amount added to s_i

        Returns:
            (ρ, ρ')
        """
        if shift % msp.modulus.d == 0:
            raise ValueError("shift must be nonzero mod d")
        a = participant_set(members)
        kappa = AccessService.condition_two_witness(msp, i, a)
        rho_prime = bundle.rho + kappa.scale(shift)
        logger.debug(f"Privacy witness for secret {i} against {format_set(a)}: κ = {kappa.to_list()}")
        return bundle.rho, rho_prime
