"""Shared exception types."""


class NumericalError(RuntimeError):
    """A dense linear-algebra kernel (SVD, eigendecomposition, solve) failed.

    When raised from inside a solver loop, ``trace`` carries the partial
    per-iteration trace collected up to the failure.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class DegenerateAffinityError(ValueError):
    """The affinity matrix carries no connectivity information (all zeros)."""
