"""Shared exception types; the CLI maps each class to a distinct exit code."""


class RieszboxError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(RieszboxError, ValueError):
    """Operands live in different ambient dimensions."""


class IncompatibleRefinement(RieszboxError, ValueError):
    """Target moduli are not positive multiples of the current ones."""


class NestingViolation(RieszboxError, ValueError):
    """An increasing/decreasing chain hypothesis fails at a given index."""


class FoldCapExceeded(RieszboxError, RuntimeError):
    """No fold modulus under the search cap reduces every folded piece."""


class CoherenceCapExceeded(RieszboxError, RuntimeError):
    """No shared modulus under the cap produces nested bases for the family."""


class EnumerationBoundExceeded(RieszboxError, RuntimeError):
    """A brute-force search would exceed the configured enumeration bound."""


class GridAlignmentError(RieszboxError, ValueError):
    """A region is not a union of full grid cells at the requested moduli."""


class SpecFormatError(RieszboxError, ValueError):
    """A region-spec or basis file does not parse exactly."""
