"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes):
``PreconditionError`` for inputs that violate an operation's contract and
``NumericalError`` for computations that could not be completed reliably.
"""


class GrassgapError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(GrassgapError, ValueError):
    pass


class NumericalError(GrassgapError, ArithmeticError):
    pass


# -- precondition / validation ------------------------------------------------

class NonOrthonormalBasis(PreconditionError):
    pass


class BadRank(PreconditionError):
    pass


class NotIdempotent(PreconditionError):
    def __init__(self, residual, message=None):
        self.residual = float(residual)
        super().__init__(message or f"matrix is not idempotent (residual {self.residual:.3e})")


class NotHermitian(PreconditionError):
    def __init__(self, residual, message=None):
        self.residual = float(residual)
        super().__init__(message or f"matrix is not Hermitian (residual {self.residual:.3e})")


class DimensionMismatch(PreconditionError):
    pass


class FieldMismatch(PreconditionError):
    pass


class GapOneObstruction(PreconditionError):
    pass


class DegeneratePair(PreconditionError):
    pass


class NotSimRelated(PreconditionError):
    pass


class NotMidpoint(PreconditionError):
    def __init__(self, message, distances=None):
        self.distances = distances or {}
        super().__init__(message)


class BadConfig(PreconditionError):
    pass


class BadReparam(PreconditionError):
    pass


class HypothesisViolated(PreconditionError):
    def __init__(self, condition, amount):
        self.condition = condition
        self.amount = float(amount)
        super().__init__(f"{condition} violated by {self.amount:.3e}")


class TooFewSamples(PreconditionError):
    pass


class RankMismatch(PreconditionError):
    pass


# -- numerical ----------------------------------------------------------------

class DecompositionFailed(NumericalError):
    def __init__(self, message, residual=float("nan")):
        self.residual = float(residual)
        super().__init__(message)


class NumericalInstability(NumericalError):
    pass


class NoConvergence(NumericalError):
    def __init__(self, message, fit=None):
        self.fit = fit
        super().__init__(message)


class CapacityExhausted(NumericalError):
    def __init__(self, case, deficit, message=None):
        self.case = case
        self.deficit = int(deficit)
        super().__init__(message or f"no admissible chain in case {case!r} (deficit {self.deficit})")


class Unclassifiable(NumericalError):
    def __init__(self, message, residuals=None):
        self.residuals = residuals or {}
        super().__init__(message)
