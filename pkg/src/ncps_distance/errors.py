"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`NCPSError`,
so callers can catch one type.  Parameter problems additionally derive from
``ValueError``.
"""


class NCPSError(Exception):
    """Base class for package errors."""


class InvalidParameter(NCPSError, ValueError):
    """A physical parameter is outside its admissible range."""


class SingularRegime(InvalidParameter):
    """theta >= hbar: the deformation degenerates and every distance collapses."""


class InvalidCutoff(NCPSError, ValueError):
    """Fock-space cutoff too small for the requested construction."""


class LabelOutOfRange(NCPSError, ValueError):
    """A Fock label does not fit in the truncated space (or its usable window)."""


class DimensionMismatch(NCPSError, ValueError):
    pass


class NotHermitian(NCPSError, ValueError):
    pass


class DegeneratePair(NCPSError, ValueError):
    """Both states coincide; there is no optimal element to build."""


class ZeroElement(NCPSError, ValueError):
    """The element commutes with the Dirac operator, so it cannot be rescaled."""


class NumericalFailure(NCPSError, RuntimeError):
    pass


class NotConverged(NCPSError, RuntimeError):
    """The supremum solver ran out of iterations while still improving.

    The best certified result found so far is attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
