"""Exception types shared across the package."""
from __future__ import annotations


class CompatError(Exception):
    """Base class for all package errors."""


class InputError(CompatError, ValueError):
    """Malformed or inconsistent input data."""


class UnsupportedGroup(InputError):
    pass


class UnsupportedCombination(CompatError):
    """A (group, decomposition type) pair for which no construction exists."""


class InvalidTriple(CompatError):
    """A standard element triple failed one of its defining conditions."""


class InvalidCocycle(InputError):
    pass


class NoOneEdgeLoop(CompatError):
    """The cutting procedure needs a vertex carrying a loop edge."""


class BudgetExceeded(CompatError):
    pass


class SearchExhausted(CompatError):
    """A bounded search finished without finding a solution."""


class PreconditionError(CompatError):
    pass
