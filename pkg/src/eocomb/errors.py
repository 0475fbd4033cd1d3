"""Exception hierarchy shared across the package."""


class EOCombError(Exception):
    """Base class for all package errors."""


class DomainError(EOCombError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class UnphysicalStateError(DomainError):
    """A covariance matrix violates the uncertainty principle beyond tolerance."""


class UnstableSystemError(EOCombError):
    """Parameters lie at or beyond the parametric-oscillation threshold."""


class SingularSystemError(EOCombError, ArithmeticError):
    """A linear system or matrix inversion is numerically singular."""


class NonUnimodalSpectrumError(EOCombError):
    """A spectrum has its maximum away from resonance (strict bandwidth mode)."""
