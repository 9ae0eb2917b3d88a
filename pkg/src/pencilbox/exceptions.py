"""Exception types shared across the toolkit."""

__all__ = [
    "ToolkitError",
    "NonSquarePencil",
    "IrregularPencil",
    "NumericalBreakdown",
    "UnsupportedJordanStructure",
    "MissingInput",
    "InconsistentInitialCondition",
    "InsufficientExpenditureData",
    "ConfigError",
    "ValidationError",
    "VerificationFailure",
]


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class NonSquarePencil(ToolkitError):
    """The operation needs a square pencil and got a rectangular one."""


class IrregularPencil(ToolkitError):
    """The pencil has no regular part to decompose (det(s F - G) == 0)."""


class NumericalBreakdown(ToolkitError):
    """A linear-algebra step lost too much accuracy to continue."""


class UnsupportedJordanStructure(ToolkitError):
    """The pencil's eigenstructure is outside the supported block shapes."""


class MissingInput(ToolkitError):
    """An input vector was requested outside the sequence's support."""


class InconsistentInitialCondition(ToolkitError):
    """The initial state does not lie on the system's solution manifold."""


class InsufficientExpenditureData(MissingInput):
    """The expenditure sequence is too short for the requested year."""


class ConfigError(ToolkitError):
    """A scenario config file or value could not be parsed."""


class ValidationError(ToolkitError):
    """A parsed scenario violates a model or range constraint."""


class VerificationFailure(ToolkitError):
    """Cross-engine verification found deviations above tolerance."""
