"""Exception hierarchy shared by all cyclet modules."""


class CycletError(Exception):
    pass


class DomainError(CycletError, ValueError):
    """An argument lies outside the domain where the method is defined."""


class NumericalError(CycletError, RuntimeError):
    """Base for failures of an iterative numerical procedure."""


class NoBoundState(NumericalError):
    """No bound level was found.

    ``best_E`` carries the lowest energy encountered (or ``None``), so
    callers can report how far the system is from binding.
    """

    def __init__(self, message, best_E=None, diagnostics=None):
        super().__init__(message)
        self.best_E = best_E
        self.diagnostics = diagnostics or {}


class ConvergenceError(NumericalError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
