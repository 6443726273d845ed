"""Exception hierarchy shared by all qspectra modules.

Exit-code mapping used by the CLI lives in qspectra.cli; the classes here
only encode the failure kind.
"""

from __future__ import annotations


class QSpectraError(Exception):
    """Base class for all library errors."""


class PreconditionError(QSpectraError):
    """An operation was called outside its documented domain."""


class BudgetExceededError(QSpectraError):
    """A state/point/depth budget ran out before the computation finished.

    Carries whatever partial result was available at the point of failure
    so callers can inspect the trace so far.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class PrecisionExhaustedError(QSpectraError):
    """A certified decision could not be made within the precision budget."""


class InconclusiveError(QSpectraError):
    """A classification or verdict had to be withheld."""


class ReducibleInputError(QSpectraError):
    """Exact arithmetic detected behaviour impossible for an irreducible
    minimal polynomial; the input polynomial may be reducible."""
