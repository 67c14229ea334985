"""Shared exception types.

Every operation distinguishes bad input (caller error, CLI exit code 1)
from a refused workload (the request is well-formed but exceeds a
configured budget, CLI exit code 2).
"""


class InvalidInputError(ValueError):
    """A parameter is outside an operation's documented domain."""


class BudgetExceededError(RuntimeError):
    """The requested computation exceeds a configured work or memory budget."""
