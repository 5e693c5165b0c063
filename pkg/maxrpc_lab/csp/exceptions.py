class CSPError(Exception):
    """Base class for solver errors."""


class NetworkError(CSPError):
    """A constraint network could not be built from the given description."""


class ContractViolation(CSPError):
    """An operation was called outside its precondition."""


class GuardExceeded(CSPError):
    """An exhaustive procedure would exceed its configured size guard."""


class SearchLimitReached(CSPError):
    """A node or time limit stopped a search before it completed."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
