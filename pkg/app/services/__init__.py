from app.services.finite_field import FieldAlgebra
from app.services.access_service import AccessService
from app.services.lmss_service import LmssService
from app.services.blackbox_service import BlackBoxService
from app.services.qudit_service import QuditSimulator
from app.services.protocol_service import ProtocolService
from app.services.noise_service import NoiseService

__all__ = ['FieldAlgebra', 'AccessService', 'LmssService', 'BlackBoxService', 'QuditSimulator', 'ProtocolService', 'NoiseService']
