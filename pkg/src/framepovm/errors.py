"""Exception hierarchy shared by all modules."""


class FramePovmError(Exception):
    """Base class for all errors raised by this package."""


class NumericalFailure(FramePovmError):
    """An eigensolver or factorization did not converge."""


class NotInvertibleError(FramePovmError):
    """Positive operator is singular or too ill-conditioned to invert."""


class DegenerateBasisError(FramePovmError):
    """Supplied columns are linearly dependent within tolerance."""


class SpaceMismatchError(FramePovmError):
    """Operands live over different sample spaces."""


class DimensionMismatchError(FramePovmError):
    """Vector or matrix dimensions do not match the operator's space."""


class NotAFrameError(FramePovmError):
    """Lower frame bound is zero within tolerance; the family is not a frame."""


class InvalidPovmError(FramePovmError):
    """Operator family violates the positive-operator-valued-measure axioms."""


class InvalidIsometryError(FramePovmError):
    """Supplied map is not unitary/isometric within tolerance."""


class NotAbsolutelyContinuousError(FramePovmError):
    """A null atom of the reference measure carries a nonzero effect."""


class EventSpaceTooLargeError(FramePovmError):
    """Exhaustive event enumeration refused: too many atoms."""


class DocumentError(FramePovmError):
    """Base class for document ingestion/serialization errors."""


class ParseError(DocumentError):
    """Input text is not well-formed JSON."""


class SchemaError(DocumentError):
    """JSON is well-formed but does not match the document schema."""


class ValidationError(DocumentError):
    """Document matches the schema but violates a domain invariant."""
