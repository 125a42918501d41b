"""
Error hierarchy.

Every failure raised by the library derives from MagniPersistError. Each class
carries the process exit code for its failure family and a short ``kind`` used
in the single-line ``error[<kind>]: <message>`` prefix printed by the CLI.
"""

from __future__ import annotations

from magnipersist.constants import ExitCodes


class MagniPersistError(Exception):
    """Base class for all library errors."""

    exit_code = ExitCodes.COMPUTATION
    kind = "error"

    def one_line(self) -> str:
        """Machine-parsable single-line rendering."""
        message = " ".join(str(self).split())
        return f"error[{self.kind}]: {message}"


# =============================================================================
# Parse errors
# =============================================================================


class ParseError(MagniPersistError):
    """Malformed input text, positioned at (line, col), both 1-based."""

    exit_code = ExitCodes.PARSE
    kind = "parse"

    def __init__(self, line: int, col: int, reason: str):
        self.line = line
        self.col = col
        self.reason = reason
        super().__init__(f"line {line}, col {col}: {reason}")


# =============================================================================
# Validation errors
# =============================================================================


class ValidationError(MagniPersistError):
    """Input or argument fails a precondition."""

    exit_code = ExitCodes.VALIDATION
    kind = "validation"


class NonSquare(ValidationError):
    kind = "non_square"


class NegativeEntry(ValidationError):
    kind = "negative_entry"

    def __init__(self, i: int, j: int, value: object):
        self.pair = (i, j)
        super().__init__(f"dist[{i}][{j}] = {value} is negative")


class RequiredFlagViolated(ValidationError):
    kind = "required_flag_violated"

    def __init__(self, flag: str, witness: tuple[int, ...]):
        self.flag = flag
        self.witness = witness
        super().__init__(f"{flag} fails at {witness}")


class IndexOutOfRange(ValidationError):
    kind = "index_out_of_range"


class NonPositiveScale(ValidationError):
    kind = "non_positive_scale"


class InfiniteDistance(ValidationError):
    kind = "infinite_distance"


class NotSeparated(ValidationError):
    kind = "not_separated"


class ZeroMinimumDistance(ValidationError):
    kind = "zero_minimum_distance"


class NotSymmetric(ValidationError):
    kind = "not_symmetric"


class NonPrimeCharacteristic(ValidationError):
    kind = "non_prime_characteristic"


class DimensionMismatch(ValidationError):
    kind = "dimension_mismatch"


class TriangleBrokenByRounding(ValidationError):
    kind = "triangle_broken_by_rounding"

    def __init__(self, witness: tuple[int, int, int], denominator: int):
        self.witness = witness
        super().__init__(
            f"rounding to multiples of 1/{denominator} breaks the triangle inequality at {witness}"
        )


class ModeMismatch(ValidationError):
    kind = "mode_mismatch"


class InsufficientDegreeBound(ValidationError):
    kind = "insufficient_degree_bound"


class ConfigError(ValidationError):
    kind = "config"


# =============================================================================
# Resource caps
# =============================================================================


class ResourceBound(MagniPersistError):
    """A configured cap was exceeded. Never truncate silently."""

    exit_code = ExitCodes.RESOURCE
    kind = "resource_bound"

    def __init__(self, what: str, count: int, cap: int):
        self.what = what
        self.count = count
        self.cap = cap
        super().__init__(f"{what} count {count} exceeds cap {cap}")


# =============================================================================
# Internal checks
# =============================================================================


class InternalCheckFailed(MagniPersistError):
    """A runtime invariant (e.g. boundary of boundary = 0) does not hold."""

    exit_code = ExitCodes.INTERNAL_CHECK
    kind = "internal_check"


# =============================================================================
# Computation errors
# =============================================================================


class ComputationError(MagniPersistError):
    exit_code = ExitCodes.COMPUTATION
    kind = "computation"


class SingularZeta(ComputationError):
    kind = "singular_zeta"


class PoleAtEvaluationPoint(ComputationError):
    kind = "pole_at_evaluation_point"


class DenominatorConstantTermZero(ComputationError):
    kind = "denominator_constant_term_zero"


class UnsortedComplex(ComputationError):
    kind = "unsorted_complex"
