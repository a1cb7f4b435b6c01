"""Exception classes.

``exit_code`` is what the command line reports when the error escapes:
1 for a mathematical verdict, 2 for malformed input, 3 for a broken
internal invariant.
"""


class LNDError(Exception):
    exit_code = 1


class ValidationError(LNDError):
    """Input rejected during validation (declared metadata, dimensions, ...)."""


class NotWellDefined(LNDError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CapExceeded(LNDError):
    """Iteration cap reached; the map was not shown to be locally nilpotent."""

    def __init__(self, message, generator=None, last=None, cap=None):
        super().__init__(message)
        self.generator = generator
        self.last = last
        self.cap = cap


class NotInKernel(LNDError):
    def __init__(self, message, index=None, witness=None):
        super().__init__(message)
        self.index = index
        self.witness = witness


class NotInJointKernel(LNDError):
    pass


class AlreadyInKernel(LNDError):
    pass


class NotExpressible(LNDError):
    """Element is not a polynomial in the given generators within the bound."""


class SolveInFFailed(NotExpressible):
    pass


class NoSeedFound(LNDError):
    pass


class NonConstantQ(LNDError):
    pass


class DegenerateFiber(LNDError):
    def __init__(self, message, alpha=None, indices=()):
        super().__init__(message)
        self.alpha = alpha
        self.indices = tuple(indices)


class ChartFailed(LNDError):
    pass


class NotDerivation(LNDError):
    pass


class InvariantViolation(LNDError):
    exit_code = 3


class DivisionNotIntegral(InvariantViolation):
    pass


class ParseError(LNDError):
    exit_code = 2

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} at offset {offset}"
        super().__init__(message)
        self.offset = offset


class UsageError(LNDError):
    """A command was invoked with missing, malformed or disallowed options."""

    exit_code = 2
