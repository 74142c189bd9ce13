"""Exception hierarchy shared by all modules."""


class FreeDecayError(Exception):
    pass


class InvalidParameterError(FreeDecayError, ValueError):
    pass


class DomainError(FreeDecayError, ValueError):
    """Evaluation outside the domain where a formula is defined (e.g. t = 0 for an asymptote)."""


class GridTooNarrowError(FreeDecayError):
    pass


class WindowTooNarrowError(FreeDecayError):
    pass


class OrderUndetectableError(FreeDecayError):
    pass


class NotApplicableError(FreeDecayError):
    pass


class DegenerateInputError(FreeDecayError):
    pass


class PreconditionError(FreeDecayError):
    """Small-momentum condition violated for the declared order."""


class NumericalFailure(FreeDecayError):
    pass


class AliasingError(NumericalFailure):
    def __init__(self, message, required_points=None):
        super().__init__(message)
        self.required_points = required_points
