"""Exception types shared across modules.

Every error raised for a mathematical precondition derives from
``DomainError`` so the command-line front end can map it to exit code 1.
"""


class DomainError(ValueError):
    """A well-formed request whose mathematical preconditions fail."""


class InvalidContext(DomainError):
    pass


class NotAUnit(DomainError):
    pass


class NotIntegral(DomainError):
    pass


class ContextMismatch(DomainError):
    pass


class NonIntegralEigenvalue(DomainError):
    pass


class NotDepleted(DomainError):
    pass


class NotInvertible(DomainError):
    pass


class Unsupported(DomainError):
    pass


class NotInParabolic(DomainError):
    pass


class Truncated(DomainError):
    pass


class NotInSubmodule(DomainError):
    pass


class NotHomogeneous(DomainError):
    pass


class NotClosed(DomainError):
    pass


class NoTermination(DomainError):
    pass


class NonVanishingConstant(DomainError):
    pass


class IndexOutOfRange(DomainError):
    pass


class PolySyntaxError(DomainError):
    """Malformed polynomial text; ``position`` is the 0-based offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position
