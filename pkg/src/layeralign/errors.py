"""Exception types shared across the package.

Each maps to a distinct CLI exit code so scripted callers can tell a bad
config from a blown enumeration budget from a genuinely infeasible scenario.
"""


class LayerAlignError(Exception):
    """Base class for package errors."""


class ConfigError(LayerAlignError):
    """Invalid or inconsistent configuration / arguments (CLI exit 2)."""


class BudgetExceededError(LayerAlignError):
    """An enumeration or search would exceed its size cap (CLI exit 3)."""

    def __init__(self, message, *, requested=None, cap=None):
        super().__init__(message)
        self.requested = requested
        self.cap = cap


class InfeasibleScenarioError(LayerAlignError):
    """The requested alignment has no solution in the requested field (CLI exit 4)."""

    def __init__(self, message, *, cycle=None):
        super().__init__(message)
        # The first offending constraint cycle, when one is known.
        self.cycle = cycle
