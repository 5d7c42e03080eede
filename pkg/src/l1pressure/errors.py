"""Exception hierarchy.

Every error raised on a violated precondition derives from
:class:`PressureError`, so callers (the CLI in particular) can map the whole
family onto a single exit code.
"""


class PressureError(ValueError):
    """Base class for precondition and computation failures."""


class NonFiniteInput(PressureError):
    pass


class DimMismatch(PressureError):
    pass


class LengthMismatch(PressureError):
    pass


class EmptyInput(PressureError):
    pass


class WrongShape(PressureError):
    pass


class NotSymmetric(PressureError):
    pass


class NonEuclideanNorm(PressureError):
    pass


class UnsupportedNorm(PressureError):
    pass


class SingularMatrix(PressureError):
    pass


class SingularSystem(SingularMatrix):
    """``I - A`` is singular, so the affine map has no unique fixed point."""


class BadSampleCount(PressureError):
    pass


class OutOfRange(PressureError):
    pass


class ZeroDelta(PressureError):
    pass


class TooManyPoints(PressureError):
    pass


class BudgetExceeded(PressureError):
    pass


class MissingEta(PressureError):
    pass


class LPDegenerate(PressureError):
    """The simplex method cycled. With Bland's rule this indicates a bug."""


class LPInfeasible(PressureError):
    pass


class LPUnbounded(PressureError):
    pass


class InvalidCertificate(PressureError):
    pass


class ZeroVector(PressureError):
    pass


class TooFewPoints(PressureError):
    pass


class NotUnitBall(PressureError):
    pass


class UnknownCase(PressureError):
    pass
