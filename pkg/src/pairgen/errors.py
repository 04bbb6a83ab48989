"""Exception hierarchy shared by the solver, sweep and CLI layers."""


class PairgenError(Exception):
    """Base class for all package errors."""


class ConfigError(PairgenError, ValueError):
    """Invalid parameter or configuration file content."""

    def __init__(self, message, field=None, line=None, column=None):
        super().__init__(message)
        self.field = field
        self.line = line
        self.column = column


class WindowRangeError(PairgenError, ValueError):
    pass


class NumericalFailure(PairgenError, ArithmeticError):
    """The integrator produced a non-finite state."""

    def __init__(self, message, q=None, t_reached=None, index=None):
        super().__init__(message)
        self.q = q
        self.t_reached = t_reached
        self.index = index


class StepBudgetExceeded(NumericalFailure):
    """The adaptive integrator ran out of steps before reaching t_end."""


class UnsupportedConfiguration(PairgenError, ValueError):
    pass


class RingNotFound(PairgenError, ValueError):
    """Requested photon order lies below the multiphoton threshold."""

    def __init__(self, message, threshold_order=None):
        super().__init__(message)
        self.threshold_order = threshold_order


class EmptySpectrum(PairgenError, ValueError):
    pass


class ValidationFailure(PairgenError):
    pass
