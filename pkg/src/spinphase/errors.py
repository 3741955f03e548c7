"""Exception hierarchy.

Numeric-domain failures (degeneracy, undefined phase, undefined basis) share
``NumericDomainError`` so the command line can map them to one exit code.
"""


class SpinPhaseError(Exception):
    """Base class for all package errors."""


class NonHermitianError(SpinPhaseError, ValueError):
    def __init__(self, max_asymmetry: float, tol: float):
        self.max_asymmetry = max_asymmetry
        self.tol = tol
        super().__init__(
            f"matrix is not Hermitian: max |M_ij - conj(M_ji)| = {max_asymmetry:.3e} "
            f"exceeds {tol:.1e}"
        )


class ConfigError(SpinPhaseError, ValueError):
    """Invalid scenario configuration or model parameters."""


class NumericDomainError(SpinPhaseError, ArithmeticError):
    """A quantity is undefined for the requested input."""


class UndefinedBasisError(NumericDomainError):
    """The analytic basis solutions need alpha > 0."""


class UndefinedPhaseError(NumericDomainError):
    """An argument of a (near) zero complex number was requested."""


class DegeneracyError(NumericDomainError):
    def __init__(self, message: str, time: float | None = None):
        self.time = time
        super().__init__(message)


class ResolutionError(NumericDomainError):
    """The time grid is too coarse for the requested computation."""
