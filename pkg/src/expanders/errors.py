"""Shared exception types.

Precondition violations are rejected inputs, never silent answers; budget
overruns fail loudly; a failed internal re-verification is a bug and aborts.
"""


class DomainError(ValueError):
    """An input violates a documented precondition."""


class BudgetExceeded(RuntimeError):
    """A configured enumeration or retry budget was exhausted."""


class SpecializationExhausted(BudgetExceeded):
    """The deterministic specialization sequence ran out of candidates.

    Distinct from a clean negative verdict: the caller cannot conclude
    anything about the input's structure.
    """


class InternalCheckError(AssertionError):
    """An exact self-verification failed; indicates an implementation bug."""
