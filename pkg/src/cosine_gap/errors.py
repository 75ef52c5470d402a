"""Exception hierarchy shared by all cosine_gap modules."""


class CosineGapError(Exception):
    """Base class for every error raised by the package."""


class DomainError(CosineGapError, ValueError):
    """An argument lies outside the domain of the operation."""


class BudgetError(DomainError):
    """The distance budget ``m`` is outside ``[0, 2)`` or too close to 2."""


class PreconditionError(CosineGapError, ValueError):
    """A documented precondition on a matrix argument does not hold."""


class SeriesTruncationError(CosineGapError, ArithmeticError):
    """A power series ran out of terms before reaching its tolerance."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (achieved residual {residual:.3e})")
        self.residual = residual


class NotDiagonalizableError(PreconditionError):
    """The matrix has a non-trivial Jordan block."""


class IllSeparatedSpectrumError(PreconditionError):
    """Two distinct eigenvalues are too close to build stable projections."""

    def __init__(self, message, gap):
        super().__init__(f"{message} (gap {gap:.3e})")
        self.gap = gap


class UnboundedFamilyError(PreconditionError):
    """The cosine family ``t -> cos(tA)`` is not bounded."""


class HypothesisNotMetError(CosineGapError):
    """The family is not certified to lie within distance 2 of cos(at) I."""


class ConsistencyError(CosineGapError, AssertionError):
    """An internal postcondition failed; indicates a bug."""
