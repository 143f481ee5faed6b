"""Shared exception types.

``InputError`` marks malformed user input (CLI exit code 2), while
``CheckRefuted`` marks a verification that ran and came back negative
(CLI exit code 1).  Everything else is a plain bug.
"""


class PtlError(ValueError):
    pass


class InputError(PtlError):
    """Malformed descriptor, polynomial, matrix or fixture data."""


class DescriptorMismatch(PtlError):
    """Operands live in different fields."""


class NonInvertible(PtlError, ZeroDivisionError):
    """Inversion of zero or of a singular matrix."""


class PreconditionError(PtlError):
    """A documented operation precondition does not hold."""


class CheckRefuted(PtlError):
    """A verification ran to completion and the claim is false."""
