"""Exception hierarchy shared by all logmod modules.

Input-validation failures and principled numerical negatives get their own
classes so that callers (and the CLI exit-code mapping) can tell them apart.
"""

from __future__ import annotations


class LogmodError(Exception):
    """Base class for every error raised by this package."""


class ParseError(LogmodError):
    """Malformed interchange file or JSON payload."""


class DimensionMismatch(LogmodError):
    """Operands whose shapes cannot be combined."""


class NotHermitian(LogmodError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NotPSD(LogmodError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


class NoConvergence(LogmodError):
    """An iterative routine exhausted its budget without meeting its target."""


class NotTransitive(LogmodError):
    """A pattern that must be transitively closed is not."""


class TooLarge(LogmodError):
    """Problem size beyond the supported enumeration / solver limits."""


class WitnessInvalid(LogmodError):
    """A proposed incomparable-pair witness is in fact comparable."""


class NotNonnegative(LogmodError):
    """A trigonometric polynomial takes negative values on the circle."""


class DegenerateLeading(LogmodError):
    """Top Fourier coefficient vanishes; the factorization degree is ill-posed."""


class NotPositive(LogmodError):
    """Boundary samples are not (uniformly) positive."""


class PrecisionUnreachable(LogmodError):
    """Requested approximation quality not attainable within the grid budget."""


class Infeasible(LogmodError):
    """A feasibility problem admits no solution; may carry a certificate.

    ``certificate``, when present, is a unit vector ``v`` with
    ``v* V_i v <= 0`` for every generator but ``v* G v > 0``.
    """

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class NotQuadratic(LogmodError):
    """A scalar form fails the quadratic-form sampling axioms."""


class NotQuadraticFamily(LogmodError):
    """A functional-valued family fails the quadratic-family sampling axioms."""


class NotPOVM(LogmodError):
    """Effects are not positive or do not sum to the identity."""


class ParallelogramViolation(LogmodError):
    """The parallelogram identity fails beyond tolerance on the sample grid."""


class NumericalFailure(LogmodError):
    """A postcondition that should hold for valid inputs was violated."""
