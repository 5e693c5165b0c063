from csp.exceptions import CSPError


class InstanceFormatError(CSPError):
    """An instance document is malformed; ``location`` points at the offending spot."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class InstanceParseError(InstanceFormatError):
    """Syntax error in an instance file."""


class UnsupportedFeatureError(InstanceFormatError):
    """The document uses a feature outside the supported subset."""
