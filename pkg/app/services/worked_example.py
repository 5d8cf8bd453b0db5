"""
The four-participant, two-secret example over Z_7.

The dealer's random choices (ρ's tail and Y) are pinned to fixed reference
values so every run reproduces the same shares and shadows.
"""
import logging
from typing import List, Tuple

from app.models.access import AccessStructure, MspInstance, MultiAccessStructure
from app.models.field import FieldMatrix, FieldVector, Modulus
from app.models.protocol import DealerConfig, ProtocolTranscript
from app.models.sharing import SecretVector
from app.services.protocol_service import ProtocolService

logger = logging.getLogger(__name__)

MODULUS = 7

M_ROWS = [
    [4, 1, 1, 1],
    [0, 0, 1, 1],
    [6, 3, 0, 0],
    [0, 1, 1, 1],
]

GAMMA_1 = [[1, 2, 3], [1, 2, 4]]
GAMMA_2 = [[1, 2, 3, 4]]

SECRETS = (2, 5)
RHO_TAIL = (1, 4)
SHARES = (4, 5, 6, 3)

Y_ROWS = [
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 1],
]

# Reference X; row 4 disagrees with Y^-1 Σ Y
REFERENCE_X_ROWS = [
    [5, 0, 0, 0, 0, 0, -1, 0],
    [0, 5, 0, 0, 0, 0, 0, 0],
    [0, 0, 4, 0, 0, 0, 0, 0],
    [0, 0, 0, 4, 0, 0, 1, 0],
    [0, 0, 0, 0, 6, 0, 0, 0],
    [0, 0, -1, 0, 0, 3, 0, 0],
    [0, 0, 0, 0, 0, 0, 6, 0],
    [-2, 0, 0, 0, 0, 0, 1, 3],
]

REFERENCE_SHADOWS = {
    1: ([0, 0, 1, 0, 0, -1, 0, 0], [0, 0, 0, 1, 0, 0, 0, 0]),
    2: ([1, 0, 0, 0, 0, 0, 0, -1], [0, 1, 0, 0, 0, 0, 0, 0]),
    3: ([0, 0, 0, 0, 1, 0, 0, 0], [-1, 0, 0, 0, 0, 0, 1, 1]),
    4: ([0, 0, 0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 0, 1, 0, 0]),
}

# Reference λ for secret 2 over Ω; it does not satisfy M^T λ = ζ_2
REFERENCE_LAMBDA_2 = (4, 5, 4, 6)

# (secret index, participants who come forward)
RUNS = ((1, (1, 2, 3)), (2, (1, 2, 3, 4)))


def modulus() -> Modulus:
    return Modulus(MODULUS)


def build_msp() -> MspInstance:
    d = modulus()
    structure = MultiAccessStructure((AccessStructure.of(*GAMMA_1), AccessStructure.of(*GAMMA_2)))
    return MspInstance(d, FieldMatrix.from_rows(d, M_ROWS), (1, 2, 3, 4), structure)


def dealer_config(seed: int = 0) -> DealerConfig:
    d = modulus()
    return DealerConfig(
        msp=build_msp(),
        secrets=SecretVector.of(d, SECRETS),
        seed=seed,
        rho_tail_override=FieldVector.of(d, RHO_TAIL),
        y_override=FieldMatrix.from_rows(d, Y_ROWS)
    )


def run_worked_example(seed: int = 0) -> List[Tuple[int, ProtocolTranscript]]:
    """Recover both secrets with the reference participant sets."""
    cfg = dealer_config(seed)
    results = []
    for secret_index, members in RUNS:
        transcript = ProtocolService.run_scenario(cfg, secret_index, members)
        logger.debug(f"Worked example secret {secret_index}: {transcript.outcome}")
        results.append((secret_index, transcript))
    return results
