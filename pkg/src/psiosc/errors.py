class PsiOscError(Exception):
    """Base class for library errors."""


class InputError(PsiOscError, ValueError):
    """Malformed or inconsistent input."""


class DomainError(InputError):
    """Argument outside the mathematical domain of an operation."""


class PreconditionError(InputError):
    """A stated hypothesis of a checked inequality does not hold."""


class UnsupportedParameters(InputError):
    """Parameters fall in a regime the exact algorithm does not cover."""


class ResourceError(PsiOscError):
    """A configured work budget would be exceeded."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
