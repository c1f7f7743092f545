"""Exception types shared across the package.

Everything here is a subclass of :class:`BorderlabError`, so callers can
catch the whole family at once.  Errors that carry diagnostic payloads
(offending position, achievable precision, ...) expose them as attributes.
"""

from __future__ import annotations


class BorderlabError(Exception):
    """Base class for all errors raised by this package."""


class FieldMismatchError(BorderlabError):
    """Two values from different coefficient fields were combined."""


class PrecisionError(BorderlabError):
    """A result cannot be certified at the available truncation order.

    Typical causes: a pivot candidate that is zero to the working precision
    but not exactly zero, or a series whose valuation cannot be read off.
    """


class SingularError(BorderlabError):
    """A matrix that had to be invertible has exactly zero determinant."""


class ShapeError(BorderlabError):
    """Dimension mismatch between operands."""


class NoLimitError(BorderlabError):
    """A one-parameter-subgroup limit does not exist.

    Attributes
    ----------
    position : tuple | None
        A tensor position witnessing the failure (1-based).
    weight : int | None
        The offending weight (negative for a t->0 limit).
    """

    def __init__(self, message: str, position=None, weight=None):
        super().__init__(message)
        self.position = position
        self.weight = weight


class WitnessVerificationFailure(BorderlabError):
    """The two limits of a constructed witness disagree.

    This is never swallowed: it indicates a precision failure or a bug.
    """


class PlacementError(BorderlabError):
    """A full-rank block does not fit inside the ambient dimensions.

    Attributes
    ----------
    interval : tuple[int, int] | None
        The first violated placement interval (1-based, inclusive).
    """

    def __init__(self, message: str, interval=None):
        super().__init__(message)
        self.interval = interval


class SizeGuardError(BorderlabError):
    """An exact-search routine was called on an instance above its guard."""
