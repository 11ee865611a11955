"""Exception hierarchy shared by the solver modules."""


class SmallZerosError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(SmallZerosError, ValueError):
    pass


class ZeroFormError(SmallZerosError, ValueError):
    """A form (or vector) that must be nonzero is identically zero."""


class PreconditionError(SmallZerosError, ValueError):
    pass


class AnisotropicError(SmallZerosError):
    """The quadratic form is certified to have no nontrivial rational zero."""


class NoSolutionError(SmallZerosError):
    """Certified: no zero of F avoids all the linear forms."""


class SearchTruncated(SmallZerosError):
    """A bounded search stopped before it could decide the question.

    This is the "unknown" outcome: neither a solution nor a certificate of
    non-existence is available within the configured cap.
    """


class FormatError(SmallZerosError, ValueError):
    """An instance or certificate document is malformed."""
