"""Exception types shared across the package.

The CLI maps these onto its exit codes: ``CheckFailed`` -> 1,
``BudgetExceeded`` -> 2, anything derived from ``ValueError`` raised while
parsing arguments -> 3.
"""


class BudgetExceeded(RuntimeError):
    """An enumeration or field construction would exceed the configured cap."""


class CheckFailed(AssertionError):
    """A structural identity that must hold did not (signals a bug)."""


class ContextMismatch(ValueError):
    """Operands live in incompatible fields or rings."""


class NotOnVariety(ValueError):
    """A point was passed to an operation defined only on a variety."""
