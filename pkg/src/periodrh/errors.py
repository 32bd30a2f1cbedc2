"""Exception hierarchy shared by all stages of the pipeline."""


class PeriodRHError(Exception):
    """Base class for every error raised by periodrh."""

    #: pipeline stage name, filled in by the driver when re-raising
    stage = None


class SpecError(PeriodRHError, ValueError):
    """A form specification or eta-quotient recipe violates an invariant."""


class CoefficientFileError(PeriodRHError, ValueError):
    """A coefficient file could not be parsed or disagrees with its spec."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class TruncationError(PeriodRHError):
    """Not enough Fourier coefficients to reach the precision budget."""

    def __init__(self, required, available):
        super().__init__(
            "need at least %d coefficients, only %d available" % (required, available)
        )
        self.required = required
        self.available = available


class InconsistencyError(PeriodRHError):
    """A numerical identity that must hold failed (wrong sign, bad data, bug)."""


class AmbiguousSignError(InconsistencyError):
    pass


class IdentityError(InconsistencyError):
    pass


class ConvergenceError(PeriodRHError):
    """Root iteration hit its cap; carries the best iterate."""

    def __init__(self, message, roots=None, residuals=None):
        super().__init__(message)
        self.roots = roots
        self.residuals = residuals


class DomainError(PeriodRHError, ValueError):
    pass


class AmbiguousAngleError(PeriodRHError):
    """The angle equation has several solutions for some index."""


class MatchingError(PeriodRHError):
    pass
