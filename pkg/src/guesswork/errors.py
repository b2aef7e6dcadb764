"""Shared exception types."""


class FactorialCapError(ValueError):
    """Raised when an exhaustive sweep over all M! numberings is refused.

    Exhaustive enumeration is capped (default M <= 10).  Above the cap, use
    the benevolent fast path of :func:`guesswork.qap.benevolent_solve`.
    """


class NumericalCheckError(RuntimeError):
    """An internal cross-check between two equivalent computations failed.

    This signals a numerical-consistency failure, not bad user input.
    """
