"""Exception hierarchy.

Input problems (bad shapes, bad parameters) derive from ``ValueError``;
numerical breakdowns derive from ``NumericalError``. The CLI maps the two
families onto exit codes 2 and 3.
"""


class NumericalError(ArithmeticError):
    """Base class for failures of a numerical routine on valid input."""


class ShapeError(ValueError):
    def __init__(self, message, *shapes):
        self.shapes = shapes
        super().__init__(message)


class NotSymmetricError(ValueError):
    pass


class NotPositiveDefiniteError(NumericalError):
    def __init__(self, index, pivot):
        self.index = index
        self.pivot = pivot
        super().__init__(f"matrix is not positive definite (pivot {pivot:.3e} at index {index})")


class ConvergenceError(NumericalError):
    def __init__(self, sweeps, off_norm):
        self.sweeps = sweeps
        self.off_norm = off_norm
        super().__init__(
            f"Jacobi iteration did not converge in {sweeps} sweeps "
            f"(residual off-diagonal norm {off_norm:.3e})"
        )


class DeflationSingularityError(NumericalError):
    """Raised when a confluent filter's pole sits on an eigenvalue."""

    def __init__(self, eigenvalue, lam):
        self.eigenvalue = eigenvalue
        self.lam = lam
        super().__init__(
            f"deflation singularity: eigenvalue {eigenvalue!r} within tolerance of lambda={lam!r}"
        )


class DivergentRegimeError(ValueError):
    pass
