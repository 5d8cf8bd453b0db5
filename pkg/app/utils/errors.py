"""Exception hierarchy shared by the services and the commands"""

from typing import List, Optional


class QmssError(Exception):
    """Base class for every error raised by the toolkit."""


class DimensionMismatch(QmssError, ValueError):
    """Operand shapes are incompatible."""


class ModulusMismatch(QmssError, ValueError):
    """Operands live over different prime fields."""


class NotPrime(QmssError, ValueError):
    """A modulus or qudit dimension is not a prime number."""


class SingularMatrix(QmssError, ValueError):
    """The matrix has no inverse over Z_d."""


class NoSolution(QmssError):
    """The linear system is inconsistent."""


class ZeroVector(QmssError, ValueError):
    """A zero vector was given where a nonzero one is required."""


class NotEigenvector(QmssError):
    """The vector is not an eigenvector of the matrix."""


class RandomSearchExhausted(QmssError):
    """Rejection sampling hit its attempt cap."""


class NotAuthorized(QmssError):
    """The participant set is not authorized for the requested secret."""


class TooManyParticipants(QmssError, ValueError):
    """Exhaustive access-structure enumeration was asked for too many participants."""


class ResourceCapExceeded(QmssError, ValueError):
    """A simulation would exceed the desk-scale memory caps."""


class InvalidMsp(QmssError):
    """The monotone span program does not realize its access structures."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"MSP validation failed with {len(report.failures)} failure(s)")


class ScenarioConfigError(QmssError, ValueError):
    """A scenario configuration document could not be parsed or validated."""

    def __init__(self, errors: List[str], source: Optional[str] = None):
        self.errors = list(errors)
        self.source = source
        prefix = f"{source}: " if source else ""
        super().__init__(prefix + "; ".join(self.errors))
