"""Exception types shared across the package."""


class LpwitnessError(Exception):
    """Base class for all errors raised by this package."""


class InfeasibleGirth(LpwitnessError):
    """Target girth was not reached within the restart budget."""


class ParseError(LpwitnessError):
    """Malformed alist input."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InconsistentWeights(ParseError):
    """Declared alist degrees disagree with the adjacency lists."""


class GirthTooSmall(LpwitnessError):
    """Graph girth is too small for the requested computation-tree depth."""


class DegreeTooSmall(LpwitnessError):
    """Operation requires a larger node degree than the graph provides."""


class DegreeTooLarge(LpwitnessError):
    """Check degree exceeds the tractability guard."""


class NumericalFailure(LpwitnessError):
    """LP solve did not reach a trustworthy optimum."""


class TooLarge(LpwitnessError):
    """Instance exceeds the brute-force enumeration guard."""
