from app.models.field import Modulus, FieldVector, FieldMatrix
from app.models.access import AccessStructure, MultiAccessStructure, MspInstance, ValidationReport
from app.models.sharing import SecretVector, ShareBundle
from app.models.blackbox import ShadowPair, BlackBoxState, CheatReason, CheatReport
from app.models.quantum import QuditRegister, DensityMatrix, ChannelKind, KrausChannel
from app.models.protocol import DealerConfig, HashCommitment, ProtocolTranscript
from app.models.noise import NoiseScenario, FidelityRow

__all__ = ['Modulus', 'FieldVector', 'FieldMatrix', 'AccessStructure', 'MultiAccessStructure', 'MspInstance', 'ValidationReport', 'SecretVector', 'ShareBundle', 'ShadowPair', 'BlackBoxState', 'CheatReason', 'CheatReport', 'QuditRegister', 'DensityMatrix', 'ChannelKind', 'KrausChannel', 'DealerConfig', 'HashCommitment', 'ProtocolTranscript', 'NoiseScenario', 'FidelityRow']
