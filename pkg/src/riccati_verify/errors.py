"""Exception hierarchy.

Every failure of a verification stage raises a subclass of
:class:`VerificationError`; the ``stage`` attribute names the pipeline step
that gave up so that batch runners can fold it into a status string.
"""


class VerificationError(Exception):
    stage = "verify"

    def __init__(self, message="", stage=None):
        super().__init__(message)
        if stage is not None:
            self.stage = stage


class UnrepresentableEnclosure(VerificationError, OverflowError):
    stage = "arithmetic"


class ZeroInDisc(VerificationError, ZeroDivisionError):
    stage = "arithmetic"


class ZeroDivisor(VerificationError, ZeroDivisionError):
    stage = "divisor"


class DimensionMismatch(VerificationError, ValueError):
    stage = "shape"


class VerificationFailed(VerificationError):
    stage = "iteration"


class InverseEnclosureFailed(VerificationError):
    stage = "inverse"


class SingularInterval(VerificationError):
    stage = "solve"


class NoSplitting(VerificationError):
    stage = "subspace"


class SingularU1(VerificationError):
    stage = "approx"


class EigFailure(VerificationError):
    stage = "eig"


class SelectionFailed(VerificationError):
    stage = "selection"


class UnstableClosedLoop(VerificationError):
    stage = "shift"


class ZeroNorm(VerificationError, ValueError):
    stage = "metric"
