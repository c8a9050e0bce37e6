"""Exception types shared across the library."""


class GraphonError(Exception):
    """Base class for all library errors."""


class ConfigError(GraphonError):
    """Invalid graphon/run configuration (bad schema, infinite measure without truncation, ...)."""


class DomainError(GraphonError, ValueError):
    """Arguments outside an operation's domain (coordinates, times, empty graphs)."""


class DegenerateGraphonError(GraphonError):
    """Operation undefined for an (almost-everywhere) zero graphon or edgeless graph."""


class ComputationError(GraphonError):
    """A numeric computation could not be carried out (non-integrable kernel, ...)."""


class ToleranceNotMetError(ComputationError):
    """Iterative refinement did not reach the requested tolerance.

    Carries the last estimate so callers can decide whether it is usable.
    """

    def __init__(self, message, last_estimate=None, achieved=None):
        super().__init__(message)
        self.last_estimate = last_estimate
        self.achieved = achieved


class BudgetExceededError(GraphonError):
    """Work budget exceeded for an exact/brute-force path; message names the cheaper alternative."""


class UnsupportedKernelError(GraphonError):
    """Operation only defined for a different kernel type (e.g. blocked sampling needs steps)."""


class EdgeListParseError(GraphonError):
    """Edge-list file could not be parsed; carries the offending line number."""

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number
