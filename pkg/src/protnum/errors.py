"""Exception types shared across the package."""


class ProtnumError(Exception):
    """Base class for all package-specific errors."""


class NonUnitDivisorError(ProtnumError, ZeroDivisionError):
    """Division by a series whose constant term vanishes."""


class SeriesDomainError(ProtnumError, ValueError):
    """Series operation applied outside its formal domain."""


class ConvergenceDomainError(ProtnumError, ValueError):
    """Evaluation point does not lie strictly inside the convergence disc."""


class DivergenceError(ProtnumError, RuntimeError):
    """Fixed-point iteration failed to extend its agreement prefix."""


class FamilyValidationError(ProtnumError, ValueError):
    """Weight sequence or family description violates a standing assumption."""


class SingularitySearchError(ProtnumError, RuntimeError):
    """Bracketing or refinement of the dominant singularity failed."""


class PrecisionError(ProtnumError, RuntimeError):
    """Requested precision is unreachable at the configured truncation order."""


class EnumerationCapError(ProtnumError, ValueError):
    """Exhaustive enumeration requested beyond the configured size cap."""


class UnsupportedOracleError(ProtnumError, ValueError):
    """Structural brute force is not defined for this family."""


class UndefinedProbabilityError(ProtnumError, ZeroDivisionError):
    """Finite-n probability whose denominator coefficient is zero."""


class ImpossibleSizeError(ProtnumError, ValueError):
    """No tree of the requested size exists in this family."""


class InternalConsistencyError(ProtnumError, RuntimeError):
    """A computed quantity violated an invariant that must hold by construction."""
