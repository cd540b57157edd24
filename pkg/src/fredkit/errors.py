"""Exception and warning types shared across fredkit."""


class FredkitError(Exception):
    """Base class for all fredkit errors."""


class InvalidArgumentError(FredkitError, ValueError):
    """An argument violates a documented range or shape constraint."""


class PreconditionViolationError(FredkitError):
    """A checked precondition failed (e.g. basis not orthonormal)."""


class EvaluationError(FredkitError):
    """Kernel evaluation failed at a node pair."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class WrongDecompositionError(FredkitError):
    """The requested decomposition does not apply to this operator."""


class DefectiveSuspectedError(FredkitError):
    """Eigenvectors coalesce; a non-diagonal Jordan structure is likely.

    Raised by the bi-orthogonal eigendecomposition when the eigenvector
    matrix is numerically singular.  Use the jordan module instead.
    """


class NoSpectrumError(FredkitError):
    """All eigenvalues are numerically zero; no spectral profile exists."""


class ClusteringError(FredkitError):
    """Eigenvalue clusters are not separated well enough to be trusted."""

    def __init__(self, message, gap=None, threshold=None):
        super().__init__(message)
        self.gap = gap
        self.threshold = threshold


class IllConditionedChainError(FredkitError):
    """Jordan chain vectors could not be computed to tolerance."""


class UnsupportedProfileError(FredkitError):
    """The spectral configuration falls outside the supported asymptotics."""


class EigenvalueProximityError(FredkitError):
    """A resolvent-type solve was requested too close to an eigenvalue."""

    def __init__(self, message, nearest=None, gap=None):
        super().__init__(message)
        self.nearest = nearest
        self.gap = gap


class PoleError(FredkitError):
    """A series or path evaluation hit a pole of the resolvent."""


class NoSolutionError(FredkitError):
    """The first-kind equation has no solution at the given parameter."""


class StartingVectorError(FredkitError):
    """A power-iteration starting vector collapsed to numerical zero."""


class ConvergenceError(FredkitError):
    """An iterative estimate failed to reach its residual tolerance."""


class UnsupportedKernelError(FredkitError):
    """The kernel body does not support the requested operation."""


class ZeroDivisionSignal(FredkitError, ZeroDivisionError):
    """Division by a zero eigenvalue was requested."""


class NontrivialityWarning(UserWarning):
    """The discretized kernel is numerically zero."""
