"""Exception hierarchy shared by the field, code and CLI layers."""


class SubpackError(Exception):
    """Base class; the CLI turns these into machine-readable error records."""

    code = "error"


class CompositeModulus(SubpackError, ValueError):
    code = "composite_modulus"


class NotABasis(SubpackError, ValueError):
    code = "not_a_basis"


class OutOfRange(SubpackError, ValueError):
    code = "out_of_range"


class BadDistance(SubpackError, ValueError):
    code = "bad_distance"


class NotConstant(SubpackError, AssertionError):
    code = "not_constant"


class DegenerateParams(SubpackError, ValueError):
    code = "degenerate_params"


class CapExceeded(SubpackError, ValueError):
    code = "cap_exceeded"


class LengthMismatch(SubpackError, ValueError):
    code = "length_mismatch"


class ShapeMismatch(SubpackError, ValueError):
    code = "shape_mismatch"


class BasisFailure(SubpackError, AssertionError):
    code = "basis_failure"


class TranscriptMismatch(SubpackError, ValueError):
    code = "transcript_mismatch"


class ResponseMismatch(SubpackError, ValueError):
    code = "response_mismatch"


class FieldTooSmall(SubpackError, ValueError):
    code = "field_too_small"


class SingularSystem(SubpackError, ArithmeticError):
    code = "singular_system"


class FieldDivisionByZero(SubpackError, ZeroDivisionError):
    code = "division_by_zero"
