"""Exception types shared across the package.

Input-validation errors (bad matrices, bad JSON, bad flags) are distinct
from mathematical precondition failures (operator outside the class an
operation is defined on); the CLI maps the two families to different
exit codes.
"""


class SemiradiusError(Exception):
    """Base class for every error raised by this package."""


# --- input / construction errors -------------------------------------------

class NotHermitian(SemiradiusError):
    """Weight candidate is not Hermitian within tolerance."""


class NotPSD(SemiradiusError):
    """Weight candidate has an eigenvalue below the negative round-off band."""


class ZeroWeight(SemiradiusError):
    """Weight candidate is zero (or numerically rank zero)."""


class DimensionMismatch(SemiradiusError):
    """Array shapes are inconsistent with the ambient dimension."""


class ContextMismatch(SemiradiusError):
    """Operands are bound to different weights."""


class BadRank(SemiradiusError):
    """Requested rank outside [1, n]."""


class UnknownCheckName(SemiradiusError):
    """Campaign asked for a check that is not registered."""


class SchemaError(SemiradiusError):
    """Instance or report JSON does not match the documented schema."""


# --- mathematical precondition failures -------------------------------------

class NotABounded(SemiradiusError):
    """Operator leaks the null space of the weight; seminorm gauges undefined."""


class NotAAdjointable(SemiradiusError):
    """Operator admits no adjoint relative to the weight."""


class ZeroRank(SemiradiusError):
    """Weight has numerical rank zero; no lift exists."""


class ANullVector(SemiradiusError):
    """Vector lies in the null cone of the weight seminorm."""


class NotUpperTriangular(SemiradiusError):
    """Block matrix has a nonzero block below the diagonal."""


class PreconditionNotParallel(SemiradiusError):
    """Pair fails the norm-parallelism hypothesis of the equality check."""


INPUT_ERRORS = (
    NotHermitian,
    NotPSD,
    ZeroWeight,
    DimensionMismatch,
    ContextMismatch,
    BadRank,
    UnknownCheckName,
    SchemaError,
)

PRECONDITION_ERRORS = (
    NotABounded,
    NotAAdjointable,
    ZeroRank,
    ANullVector,
    NotUpperTriangular,
    PreconditionNotParallel,
)
