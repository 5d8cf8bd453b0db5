"""
Scenario loader.

Turns a validated JSON scenario document into the objects the protocol
service runs on. Matrix entries may be negative and are reduced mod d.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from app.models.access import AccessStructure, MspInstance, MultiAccessStructure
from app.models.blackbox import ShadowPair
from app.models.field import FieldMatrix, FieldVector, Modulus
from app.models.protocol import (
    HONEST, DealerConfig, ForgePauli, ForgeShadows, InterceptResend, ParticipantBehavior
)
from app.models.sharing import SecretVector
from app.services.access_service import AccessService
from app.utils.errors import QmssError, ScenarioConfigError
from app.utils.validators import (
    anchor_errors, load_json_document, validate_dealer_section,
    validate_msp_section, validate_scenario_section
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScenarioRun:
    """Inputs of one run_scenario call."""

    cfg: DealerConfig
    secret_index: int
    authorized_set: Tuple[int, ...]
    behaviors: Dict[int, ParticipantBehavior] = field(default_factory=dict)
    eavesdropper: Optional[InterceptResend] = None


class ScenarioLoader:
    """Build MSPs and runs from scenario documents"""

    @staticmethod
    def read(path: str) -> Tuple[Dict, str]:
        """Load a document and keep its raw text for line anchors."""
        doc = load_json_document(path)
        with open(path, 'r', encoding='utf-8') as handle:
            return doc, handle.read()

    @staticmethod
    def _fail(errors, text: Optional[str], source: str):
        raise ScenarioConfigError(anchor_errors(errors, text, source))

    @staticmethod
    def build_msp(doc: Dict, source: str = '<config>', text: Optional[str] = None,
                  max_participants: int = AccessService.MAX_PARTICIPANTS) -> MspInstance:
        """
        Build the MspInstance described by a document.

        Raises:
            ScenarioConfigError: schema violations, or model invariants such
                as a non-antichain access structure
        """
        is_valid, errors = validate_msp_section(doc, max_participants)
        if not is_valid:
            ScenarioLoader._fail(errors, text, source)

        modulus = Modulus(doc['modulus'])
        matrix = FieldMatrix.from_rows(modulus, doc['matrix'])
        owners = doc.get('row_owners') or list(range(1, matrix.rows + 1))
        try:
            structure = MultiAccessStructure(tuple(
                AccessStructure.of(*gamma) for gamma in doc['access_structures']
            ))
            return MspInstance(modulus, matrix, tuple(owners), structure)
        except (QmssError, ValueError) as e:
            ScenarioLoader._fail([f"access_structures: {e}"], text, source)

    @staticmethod
    def build_dealer(doc: Dict, msp: MspInstance, seed: int, source: str = '<config>',
                     text: Optional[str] = None) -> DealerConfig:
        """DealerConfig for the document; `seed` has already been resolved by the caller."""
        d = msp.modulus.d
        is_valid, errors = validate_dealer_section(doc, d, msp.m, msp.l, msp.n_secrets)
        if not is_valid:
            ScenarioLoader._fail(errors, text, source)

        tail = doc.get('rho_tail')
        y = doc.get('y_matrix')
        return DealerConfig(
            msp=msp,
            secrets=SecretVector.of(msp.modulus, doc['secrets']),
            seed=seed,
            rho_tail_override=FieldVector.of(msp.modulus, tail) if tail is not None else None,
            y_override=FieldMatrix.from_rows(msp.modulus, y) if y is not None else None
        )

    @staticmethod
    def _behavior(entry: Dict, modulus: Modulus) -> ParticipantBehavior:
        kind = entry['type']
        if kind == 'forge_pauli':
            return ForgePauli(entry['delta'])
        if kind == 'forge_shadows':
            shadows = entry.get('shadows')
            if shadows is None:
                return ForgeShadows()
            return ForgeShadows(ShadowPair(FieldVector.of(modulus, shadows[0]), FieldVector.of(modulus, shadows[1])))
        return HONEST

    @staticmethod
    def build_run(doc: Dict, seed: int, source: str = '<config>', text: Optional[str] = None,
                  max_participants: int = AccessService.MAX_PARTICIPANTS) -> ScenarioRun:
        """
        Build everything `run` needs from one document.

        Args:
            doc: Decoded scenario document
            seed: Resolved seed (flag, environment, document or default)
            source: File name used in error messages
            text: Raw document text for line anchors
            max_participants: Participant cap

        Returns:
            ScenarioRun
        """
        msp = ScenarioLoader.build_msp(doc, source, text, max_participants)
        cfg = ScenarioLoader.build_dealer(doc, msp, seed, source, text)
        is_valid, errors = validate_scenario_section(doc, msp.modulus.d, msp.m, msp.n_secrets)
        if not is_valid:
            ScenarioLoader._fail(errors, text, source)

        scenario = doc['scenario']
        behaviors = {
            int(p): ScenarioLoader._behavior(entry, msp.modulus)
            for p, entry in scenario.get('behaviors', {}).items()
        }
        eavesdropper = scenario.get('eavesdropper')
        run = ScenarioRun(
            cfg=cfg,
            secret_index=scenario['target_secret'],
            authorized_set=tuple(sorted(scenario['authorized_set'])),
            behaviors={p: b for p, b in behaviors.items() if b is not HONEST},
            eavesdropper=InterceptResend(eavesdropper['wire']) if eavesdropper else None
        )
        logger.debug(f"Loaded scenario from {source}: secret {run.secret_index}, set {list(run.authorized_set)}")
        return run
