"""Dealer inputs, participant behaviors and run transcripts"""

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from app.models.access import MspInstance
from app.models.blackbox import CheatReport, ShadowPair
from app.models.field import FieldMatrix, FieldVector, Modulus
from app.models.sharing import SecretVector
from app.utils.errors import DimensionMismatch, ModulusMismatch

TRANSCRIPT_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class DealerConfig:
    """
    Everything the dealer needs for the distribution phase.

    The overrides pin ρ's random tail and Y so a known run can be
    reproduced exactly; normal runs leave them unset.
    """

    msp: MspInstance
    secrets: SecretVector
    seed: int = 0
    rho_tail_override: Optional[FieldVector] = None
    y_override: Optional[FieldMatrix] = None

    def __post_init__(self):
        if self.secrets.modulus != self.msp.modulus:
            raise ModulusMismatch("Secrets and MSP use different moduli")
        if len(self.secrets) != self.msp.n_secrets:
            raise DimensionMismatch(f"MSP shares {self.msp.n_secrets} secret(s), got {len(self.secrets)}")
        tail = self.rho_tail_override
        if tail is not None and len(tail) != self.msp.l - self.msp.n_secrets:
            raise DimensionMismatch(f"ρ tail must have length {self.msp.l - self.msp.n_secrets}")
        y = self.y_override
        if y is not None and (y.rows != 2 * self.msp.m or not y.is_square):
            raise DimensionMismatch(f"Y must be {2 * self.msp.m}x{2 * self.msp.m}")


@dataclass(frozen=True)
class Honest:
    def describe(self) -> Dict:
        return {'type': 'honest'}


@dataclass(frozen=True)
class ForgeShadows:
    """Submit a different shadow pair; None draws a uniformly random one."""

    replacement: Optional[ShadowPair] = None

    def describe(self) -> Dict:
        return {'type': 'forge_shadows', 'random': self.replacement is None}


@dataclass(frozen=True)
class ForgePauli:
    """Apply U_{0, λ_j sh_j + delta} instead of the honest phase."""

    delta: int

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError(f"A forged Pauli delta must be at least 1, got {self.delta}")

    def check(self, modulus: Modulus):
        if self.delta > modulus.d - 1:
            raise ValueError(f"Pauli delta must lie in [1, {modulus.d - 1}], got {self.delta}")

    def describe(self) -> Dict:
        return {'type': 'forge_pauli', 'delta': self.delta}


ParticipantBehavior = Union[Honest, ForgeShadows, ForgePauli]
HONEST = Honest()


@dataclass(frozen=True)
class InterceptResend:
    """Measures one distributed wire in the computational basis and resends it."""

    wire: int

    def __post_init__(self):
        if self.wire < 2:
            raise ValueError("Only distributed wires (2..t) can be intercepted")

    def describe(self) -> Dict:
        return {'type': 'intercept_resend', 'wire': self.wire}


@dataclass(frozen=True)
class HashCommitment:
    """Published digests H_i = h(s_i)."""

    modulus: Modulus
    digests: Tuple[bytes, ...]

    def __post_init__(self):
        for digest in self.digests:
            if len(digest) != 32:
                raise ValueError("Commitment digests must be 32 bytes")

    def digest(self, i: int) -> bytes:
        return self.digests[i - 1]

    def to_hex(self) -> List[str]:
        return [digest.hex() for digest in self.digests]


@dataclass
class RecoveryRecord:
    """What the recovery circuit did for one set of participants."""

    participants: Tuple[int, ...]
    exponents: Tuple[int, ...]
    outcomes: Tuple[int, ...]
    recovered: int
    events: List[str] = field(default_factory=list)
    intercepted: Optional[Dict] = None

    def to_dict(self):
        data = {
            'participants': list(self.participants),
            'exponents': list(self.exponents),
            'outcomes': list(self.outcomes),
            'recovered': self.recovered,
            'events': list(self.events)
        }
        if self.intercepted is not None:
            data['intercepted'] = self.intercepted
        return data


@dataclass
class ProtocolTranscript:
    """
    The full record of one run.

    `recovery` is set iff the cheat phase did not abort. Timings are
    only serialized when collected, privacy gaps only when the MSP has some.
    """

    seed: int
    d: int
    secret_index: int
    requested_set: Tuple[int, ...]
    shares: List[int]
    shadows: Dict[int, ShadowPair]
    commitment: HashCommitment
    cheat_report: CheatReport
    behaviors: Dict[int, Dict] = field(default_factory=dict)
    phases: List[str] = field(default_factory=list)
    recombination: Optional[List[int]] = None
    recovery: Optional[RecoveryRecord] = None
    hash_ok: Optional[bool] = None
    eavesdropper: Optional[Dict] = None
    timings: Optional[Dict[str, float]] = None
    privacy_gaps: List[Dict] = field(default_factory=list)

    @property
    def aborted(self) -> bool:
        return self.cheat_report.aborted

    @property
    def outcome(self) -> str:
        if self.aborted:
            return 'aborted'
        return 'verified' if self.hash_ok else 'hash_mismatch'

    @property
    def recovered(self) -> Optional[int]:
        return self.recovery.recovered if self.recovery is not None else None

    def to_dict(self):
        data = {
            'schema_version': TRANSCRIPT_SCHEMA_VERSION,
            'seed': self.seed,
            'd': self.d,
            'secret_index': self.secret_index,
            'requested_set': list(self.requested_set),
            'phases': list(self.phases),
            'shares': list(self.shares),
            'shadows': {str(p): pair.to_list() for p, pair in sorted(self.shadows.items())},
            'commitment': self.commitment.to_hex(),
            'behaviors': {str(p): b for p, b in sorted(self.behaviors.items())},
            'cheat_report': self.cheat_report.to_dict(),
            'recombination': self.recombination,
            'recovery': self.recovery.to_dict() if self.recovery is not None else None,
            'hash_ok': self.hash_ok,
            'outcome': self.outcome
        }
        if self.eavesdropper is not None:
            data['eavesdropper'] = self.eavesdropper
        if self.timings is not None:
            data['timings'] = self.timings
        if self.privacy_gaps:
            data['privacy_gaps'] = self.privacy_gaps
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)
