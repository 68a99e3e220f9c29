"""Exception types raised by the library."""


class HeisenError(Exception):
    """Base class for library errors."""


class GroupMismatchError(HeisenError, ValueError):
    """Operands live in different groups."""


class ConstraintError(HeisenError, ValueError):
    """A matrix entry violates a divisibility or modulus constraint."""


class BoundExceededError(HeisenError, ValueError):
    """An exhaustive operation would exceed the configured size bound."""


class DegenerateFormError(HeisenError, ValueError):
    """A non-degenerate form was required.

    ``witness`` holds a nonzero kernel element of the flat map, when one
    was found.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvariantError(HeisenError, RuntimeError):
    """An internal invariant failed; indicates corrupted input or a bug."""


class ParseError(HeisenError, ValueError):
    """Malformed group literal or input document."""
