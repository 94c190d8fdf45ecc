"""Exception types and resource limits shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class FibrephiError(Exception):
    """Base class for all errors raised by this package."""


class RingMismatchError(FibrephiError):
    """Operands belong to different polynomial rings."""


class ZeroPolynomialError(FibrephiError):
    """An operation that needs a nonzero polynomial received zero."""


class ParseError(FibrephiError):
    """Syntax or semantic error while parsing text input."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SetupError(FibrephiError):
    """Invalid or inconsistent projection setup data."""


class EmptySpaceError(SetupError):
    """The defining ideal of the source space is the unit ideal."""


class OffTargetError(FibrephiError):
    """A point handed to a fibre computation does not lie on the target."""


class PreconditionError(FibrephiError):
    """A documented precondition of an operation does not hold."""


class ResourceLimitError(FibrephiError):
    """A configured resource cap was exceeded; the result was NOT computed."""


class InternalInconsistencyError(FibrephiError):
    """Two internally computed facts contradict each other (a bug, not bad input)."""


@dataclass(frozen=True)
class Limits:
    """Resource caps for the algorithmic layer.

    All caps abort with :class:`ResourceLimitError` instead of silently
    truncating a result.
    """

    groebner_max_basis: int = 4096
    groebner_max_reductions: int = 500_000
    saturation_exponent_cap: int = 64
    split_depth: int = 8
    vertical_depth: int = 4
    stratify_max_nodes: int = 512
    sample_attempts: int = 400


DEFAULT_LIMITS = Limits()
