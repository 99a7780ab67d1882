"""Domain errors."""


class TwistShaError(Exception):
    """Base class for all domain errors."""


class InvalidInputError(TwistShaError):
    """Input that the caller can correct."""


class InvalidDiscriminantError(InvalidInputError):
    """Integer is not a quadratic discriminant."""


class SignConditionError(InvalidInputError):
    """Discriminant violates (-1)^(k/2) * D > 0."""


class VanishingCoefficientError(InvalidInputError):
    """Plus-space coefficient is zero, so the central L-value may vanish."""


class BadReductionError(InvalidInputError):
    """Prime divides the level."""


class FactsFileError(InvalidInputError):
    """Facts file is malformed or an entry lacks provenance."""


class PrecisionError(InvalidInputError, IndexError):
    """Coefficient requested beyond the known precision of a series."""


class ConsistencyError(TwistShaError):
    """Computed data contradicts an internal invariant."""
