"""Exceptions raised by the ptcfsk library.

Library code raises, the command line front end maps exceptions to exit
codes (see :mod:`ptcfsk.ptcfsk`).
"""


class PtcfskError(Exception):
    """Base class for all ptcfsk errors."""


class DomainError(PtcfskError, ValueError):
    """An argument is outside the domain of an operation.

    Examples are a symbol index >= M, code matrices of different size or a
    nonpositive noise density.
    """


class ConfigurationError(PtcfskError):
    """A configuration is inconsistent or cannot be parsed.

    Attributes:
        line (int | None): Line number in the configuration file the error
            refers to, if known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)


class SinrGuardError(PtcfskError):
    """The SU would push the PU receiver below its SINR threshold."""


class BudgetExceededError(PtcfskError):
    """An exhaustive enumeration is larger than the configured budget.

    Attributes:
        size (int): Number of items the enumeration would need.
        budget (int): Configured maximum.
    """

    def __init__(self, what: str, size: int, budget: int):
        self.size = size
        self.budget = budget
        super().__init__(
            f'{what} needs {size} enumerations, budget is {budget}.'
        )


class DegenerateModelError(PtcfskError, ValueError):
    """A Markov occupancy model with r + p = 0 has no unique steady state."""
