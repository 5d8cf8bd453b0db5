"""
Protocol service.

Runs the three phases end to end: the dealer distributes shares, shadows
and hash commitments; the Black box weeds out cheaters; the remaining
participants recover the secret through the qudit circuit and check it
against the published hash.
"""
import hmac
import logging
import time
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np
from cryptography.hazmat.primitives import hashes

from app.models.access import AccessStructure, ValidationReport, format_set, participant_set
from app.models.blackbox import BlackBoxState, CheatReport, ShadowPair
from app.models.field import FieldVector, Modulus
from app.models.protocol import (
    HONEST, DealerConfig, ForgePauli, ForgeShadows, HashCommitment,
    InterceptResend, ParticipantBehavior, ProtocolTranscript, RecoveryRecord
)
from app.models.quantum import STATE_VECTOR_CAP
from app.models.sharing import SecretVector, ShareBundle
from app.services.access_service import AccessService
from app.services.blackbox_service import BlackBoxService
from app.services.finite_field import FieldAlgebra
from app.services.lmss_service import LmssService
from app.services.qudit_service import QuditSimulator
from app.utils.errors import DimensionMismatch, InvalidMsp
from app.utils.rng import spawn_streams

logger = logging.getLogger(__name__)

HASH_DOMAIN = b'QMSS-v1'


class ProtocolService:
    """Service orchestrating distribution, cheat identification and recovery"""

    @staticmethod
    def hash_secret(modulus: Modulus, s: int) -> bytes:
        """
        SHA-256 of "QMSS-v1" || d (8 bytes, big-endian) || s (8 bytes, big-endian).

        Args:
            modulus: Field the secret lives in
            s: Secret in [0, d-1]

        Returns:
            32-byte digest
        """
        if not 0 <= int(s) < modulus.d:
            raise ValueError(f"Secret {s} is outside Z_{modulus.d}")
        digest = hashes.Hash(hashes.SHA256())
        digest.update(HASH_DOMAIN)
        digest.update(modulus.d.to_bytes(8, 'big'))
        digest.update(int(s).to_bytes(8, 'big'))
        return digest.finalize()

    @staticmethod
    def publish_commitment(secrets: SecretVector) -> HashCommitment:
        return HashCommitment(
            secrets.modulus,
            tuple(ProtocolService.hash_secret(secrets.modulus, s) for s in secrets.secrets)
        )

    @staticmethod
    def distribution_phase(
        cfg: DealerConfig,
        streams: Optional[Mapping[str, np.random.Generator]] = None,
        max_participants: int = AccessService.MAX_PARTICIPANTS,
        max_attempts: int = FieldAlgebra.DEFAULT_MAX_ATTEMPTS,
        strict: bool = False,
        report: Optional[ValidationReport] = None
    ) -> Tuple[ShareBundle, BlackBoxState, Dict[int, ShadowPair], HashCommitment]:
        """
        Validate the MSP, deal the shares, build the Black box and publish hashes.

        Distribution only needs condition (1): every authorized set must
        reach its target. Unauthorized sets that can still compute a
        secret (condition (2) failures) are logged as privacy gaps and
        the phase goes ahead, unless `strict` is set.

        Args:
            cfg: Dealer inputs
            streams: Named generators (spawned from cfg.seed when omitted)
            max_participants: Cap for the MSP validation enumeration
            max_attempts: Rejection cap for sampling Y
            strict: Refuse an MSP that fails either condition
            report: Validation report already computed for cfg.msp

        Returns:
            Tuple of (shares, Black box state, issued shadows, commitment)

        Raises:
            InvalidMsp: an authorized set cannot reach its target, or any
                failure at all under `strict`
        """
        if report is None:
            report = AccessService.validate_msp(cfg.msp, max_participants)
        if not report.reconstructs or (strict and not report.is_valid):
            raise InvalidMsp(report)
        for i, members in report.privacy_gaps():
            logger.warning(f"Privacy gap: unauthorized set {format_set(members)} can compute s{i}")
        if streams is None:
            streams = spawn_streams(cfg.seed)

        bundle = LmssService.distribute(cfg.msp, cfg.secrets, streams['distribution'], cfg.rho_tail_override)
        state, shadows = BlackBoxService.build(
            bundle,
            streams['blackbox'],
            row_owners=cfg.msp.row_owners,
            y_override=cfg.y_override,
            max_attempts=max_attempts
        )
        commitment = ProtocolService.publish_commitment(cfg.secrets)
        logger.info(f"Distribution phase complete: {cfg.msp.m} shares, {len(commitment.digests)} commitment(s)")
        return bundle, state, shadows, commitment

    @staticmethod
    def cheating_identification(
        state: BlackBoxState,
        submissions: Mapping[int, ShadowPair],
        gamma_i: AccessStructure
    ) -> Tuple[CheatReport, Optional[Dict[int, int]]]:
        """Hand the submitted shadows to the Black box."""
        return BlackBoxService.identify_and_release(state, submissions, gamma_i)

    @staticmethod
    def _exponents(
        modulus: Modulus,
        participants: Sequence[int],
        shares_a: FieldVector,
        lam: FieldVector,
        behaviors: Mapping[int, ParticipantBehavior]
    ) -> Tuple[int, ...]:
        exponents = []
        for j, p in enumerate(participants):
            e = shares_a[j] * lam[j]
            behavior = behaviors.get(p, HONEST)
            if isinstance(behavior, ForgePauli):
                behavior.check(modulus)
                e += behavior.delta
            exponents.append(e % modulus.d)
        return tuple(exponents)

    @staticmethod
    def _run_circuit(
        modulus: Modulus,
        participants: Sequence[int],
        exponents: Sequence[int],
        rng: np.random.Generator,
        eavesdropper: Optional[InterceptResend] = None,
        eavesdropper_rng: Optional[np.random.Generator] = None,
        state_cap: int = STATE_VECTOR_CAP
    ) -> RecoveryRecord:
        d, t = modulus.d, len(exponents)
        register = QuditSimulator.prepare_ghz(d, t, state_cap)
        events = [f"prepare |0>^{t}", "qft wire 1"]
        events.extend(f"sum 1->{k}" for k in range(2, t + 1))

        intercepted = None
        if eavesdropper is not None and eavesdropper.wire > t:
            events.append(f"wire {eavesdropper.wire} not in use, nothing intercepted")
        elif eavesdropper is not None:
            value, register = QuditSimulator.measure_wire(
                register, eavesdropper.wire, eavesdropper_rng if eavesdropper_rng is not None else rng
            )
            intercepted = {'wire': eavesdropper.wire, 'observed': value}
            events.append(f"intercept-resend on wire {eavesdropper.wire}")
            logger.debug(f"Eavesdropper measured wire {eavesdropper.wire} = {value}")

        for wire, e in enumerate(exponents, start=1):
            register = QuditSimulator.pauli(register, wire, 0, e)
            events.append(f"P{participants[wire - 1]} applies U(0,{e}) on wire {wire}")
        for wire in range(1, t + 1):
            register = QuditSimulator.iqft(register, wire)
        events.append("iqft on every wire")

        outcomes, _ = QuditSimulator.measure_all(register, rng)
        recovered = sum(outcomes) % d
        events.append("measure and broadcast outcomes")
        return RecoveryRecord(
            participants=tuple(participants),
            exponents=tuple(exponents),
            outcomes=tuple(outcomes),
            recovered=recovered,
            events=events,
            intercepted=intercepted
        )

    @staticmethod
    def recovery_phase(
        modulus: Modulus,
        participants: Sequence[int],
        shares_a: FieldVector,
        lam: FieldVector,
        behaviors: Mapping[int, ParticipantBehavior],
        rng: np.random.Generator,
        eavesdropper: Optional[InterceptResend] = None,
        eavesdropper_rng: Optional[np.random.Generator] = None,
        state_cap: int = STATE_VECTOR_CAP
    ) -> RecoveryRecord:
        """
        Recover Σ λ_j sh_j mod d with the qudit circuit.

        Wire j belongs to participants[j-1], who applies U_{0, λ_j sh_j}
        (plus delta under ForgePauli). After the inverse transforms the
        outcomes always sum to the phase total mod d.

        Args:
            modulus: Field and qudit dimension
            participants: Participants in row order of M_A
            shares_a: Their released shares
            lam: Recombination vector for the same rows
            behaviors: participant -> behavior (honest when absent)
            rng: Generator for the final measurement
            eavesdropper: Optional intercept-resend attack on one wire
            eavesdropper_rng: Generator for the eavesdropper's measurement
            state_cap: Largest register d^t the simulator may allocate

        Returns:
            RecoveryRecord with exponents, outcomes and the recovered value
        """
        t = len(shares_a)
        if len(lam) != t or len(participants) != t:
            raise DimensionMismatch("Shares, λ and participants must have the same length")
        if t < 2:
            raise ValueError(f"The recovery circuit needs at least two participants, got {t}")
        exponents = ProtocolService._exponents(modulus, participants, shares_a, lam, behaviors)
        return ProtocolService._run_circuit(
            modulus, participants, exponents, rng, eavesdropper, eavesdropper_rng, state_cap
        )

    @staticmethod
    def verify_recovered(commitment: HashCommitment, i: int, recovered: int) -> bool:
        """True iff h(recovered) equals the published H_i."""
        if not 1 <= i <= len(commitment.digests):
            raise IndexError(f"Secret index {i} outside 1..{len(commitment.digests)}")
        candidate = ProtocolService.hash_secret(commitment.modulus, int(recovered) % commitment.modulus.d)
        return hmac.compare_digest(candidate, commitment.digest(i))

    @staticmethod
    def run_scenario(
        cfg: DealerConfig,
        secret_index: int,
        authorized_set: Iterable[int],
        behaviors: Optional[Mapping[int, ParticipantBehavior]] = None,
        eavesdropper: Optional[InterceptResend] = None,
        collect_timings: bool = False,
        max_participants: int = AccessService.MAX_PARTICIPANTS,
        max_attempts: int = FieldAlgebra.DEFAULT_MAX_ATTEMPTS,
        strict: bool = False,
        state_cap: int = STATE_VECTOR_CAP
    ) -> ProtocolTranscript:
        """
        Run distribution, cheat identification, recovery and verification.

        All randomness comes from streams spawned off cfg.seed. Aborts are
        recorded in the transcript, not raised.

        Args:
            cfg: Dealer inputs
            secret_index: 1-based index of the secret to recover
            authorized_set: Participants who come forward (at least two)
            behaviors: participant -> behavior, honest when absent
            eavesdropper: Optional intercept-resend attack
            collect_timings: Record per-phase wall-clock seconds
            max_participants: Cap for the MSP validation enumeration
            max_attempts: Rejection cap for sampling Y
            strict: Refuse an MSP with privacy gaps as well
            state_cap: Largest register d^t the recovery circuit may allocate

        Returns:
            ProtocolTranscript

        Raises:
            InvalidMsp: see distribution_phase
            ResourceCapExceeded: the honest set needs a register above state_cap
        """
        msp = cfg.msp
        if not 1 <= secret_index <= msp.n_secrets:
            raise ValueError(f"Secret index {secret_index} outside 1..{msp.n_secrets}")
        requested = participant_set(authorized_set)
        if not requested <= msp.participants():
            raise ValueError(f"{format_set(requested)} is not a subset of Ω")
        if len(requested) < 2:
            raise ValueError("At least two participants must come forward")
        behaviors = dict(behaviors or {})
        stray = set(behaviors) - requested
        if stray:
            raise ValueError(f"Behaviors given for participants outside the set: {format_set(stray)}")
        for behavior in behaviors.values():
            if isinstance(behavior, ForgePauli):
                behavior.check(msp.modulus)

        streams = spawn_streams(cfg.seed)
        timings: Dict[str, float] = {}
        phases = []

        started = time.perf_counter()
        validation = AccessService.validate_msp(msp, max_participants)
        _, state, shadows, commitment = ProtocolService.distribution_phase(
            cfg, streams, max_participants, max_attempts, strict, validation
        )
        timings['distribution'] = time.perf_counter() - started
        phases.append('distribution')

        started = time.perf_counter()
        submissions = {}
        for p in sorted(requested):
            behavior = behaviors.get(p, HONEST)
            if isinstance(behavior, ForgeShadows):
                submissions[p] = behavior.replacement or BlackBoxService.random_forged_pair(
                    msp.modulus, msp.m, streams['forgery']
                )
            else:
                submissions[p] = shadows[p]
        gamma_i = msp.structure.for_secret(secret_index)
        report, released = ProtocolService.cheating_identification(state, submissions, gamma_i)
        timings['cheating_identification'] = time.perf_counter() - started
        phases.append('cheating_identification')

        transcript = ProtocolTranscript(
            seed=cfg.seed,
            d=msp.modulus.d,
            secret_index=secret_index,
            requested_set=tuple(sorted(requested)),
            shares=[int(s) for s in state.stored_shares.to_list()],
            shadows=shadows,
            commitment=commitment,
            cheat_report=report,
            behaviors={p: b.describe() for p, b in behaviors.items()},
            phases=phases,
            eavesdropper=eavesdropper.describe() if eavesdropper is not None else None,
            privacy_gaps=[{'secret': i, 'set': sorted(members)} for i, members in validation.privacy_gaps()]
        )

        if released is None:
            logger.warning(f"Run aborted for secret {secret_index}: cheaters {sorted(report.cheaters())}")
            if collect_timings:
                transcript.timings = timings
            return transcript

        started = time.perf_counter()
        honest = participant_set(released)
        lam = AccessService.recombination_vector(msp, secret_index, honest)
        ordered = [msp.row_owners[k] for k in msp.rows_for(honest)]
        shares_a = FieldVector.of(msp.modulus, [released[p] for p in ordered])
        exponents = ProtocolService._exponents(msp.modulus, ordered, shares_a, lam, behaviors)
        # A lone authorized participant still runs the circuit on one wire
        recovery = ProtocolService._run_circuit(
            msp.modulus, ordered, exponents, streams['recovery'], eavesdropper, streams['channel'], state_cap
        )
        timings['recovery'] = time.perf_counter() - started
        phases.append('recovery')

        transcript.recombination = lam.to_list()
        transcript.recovery = recovery
        transcript.hash_ok = ProtocolService.verify_recovered(commitment, secret_index, recovery.recovered)
        phases.append('verification')
        if collect_timings:
            transcript.timings = timings

        if transcript.hash_ok:
            logger.info(f"Secret {secret_index} recovered and verified by {format_set(honest)}")
        else:
            logger.warning(f"Secret {secret_index} recovered as {recovery.recovered} but failed the hash check")
        return transcript
