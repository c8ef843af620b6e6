"""Exception hierarchy.

Two families matter to callers: :class:`ValidationError` (bad input, exit
code 2 in the CLI) and :class:`ResourceLimitError` (a search or ring is too
large for exhaustive treatment, exit code 3).
"""

from __future__ import annotations


class DeltaRingError(Exception):
    """Base class for every error raised by this package."""

    kind = "error"


class ValidationError(DeltaRingError, ValueError):
    kind = "validation"


class ResourceLimitError(DeltaRingError):
    kind = "resource"


class PrimeMismatch(ValidationError):
    kind = "prime_mismatch"


class NotAUnit(ValidationError):
    kind = "not_a_unit"


class NotDivisible(ValidationError):
    kind = "not_divisible"


class PrecisionExhausted(ValidationError):
    kind = "precision_exhausted"


class NotIrreducible(ValidationError):
    kind = "not_irreducible"


class GroupMismatch(ValidationError):
    kind = "group_mismatch"


class ContextMismatch(ValidationError):
    kind = "context_mismatch"


class GroupNotFinite(ValidationError):
    kind = "group_not_finite"


class GroupNotPPower(ValidationError):
    kind = "group_not_p_power"


class NotSquareZero(ValidationError):
    kind = "not_square_zero"


class PreconditionViolated(ValidationError):
    kind = "precondition_violated"


class UnsupportedContext(ValidationError):
    kind = "unsupported_context"


class InvalidSpec(ValidationError):
    kind = "invalid_spec"


class RingTooLarge(ResourceLimitError):
    kind = "ring_too_large"


class SearchTooLarge(ResourceLimitError):
    kind = "search_too_large"


class DescriptorSyntaxError(ValidationError):
    """Raised by the descriptor parser; carries the byte offset of the failure."""

    kind = "syntax"

    def __init__(self, offset: int, expected: str, text: str = ""):
        self.offset = offset
        self.expected = expected
        self.text = text
        super().__init__(f"at offset {offset}: expected {expected}")
