"""Exception types shared across the package."""


class CliqueSamplerError(Exception):
    """Base class for all errors raised by this package."""


class UnknownVertex(CliqueSamplerError, IndexError):
    pass


class IndexOutOfRange(CliqueSamplerError, IndexError):
    pass


class BudgetExhausted(CliqueSamplerError):
    """Raised by an oracle before it would answer a query past its budget."""


class ParseError(CliqueSamplerError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NonSymmetricInput(CliqueSamplerError, ValueError):
    pass


class NotAssigned(CliqueSamplerError, ValueError):
    pass


class ConfigError(CliqueSamplerError, ValueError):
    pass


class ParamError(CliqueSamplerError, ValueError):
    pass


class RegimeUnsupported(CliqueSamplerError, ValueError):
    """Parameters fall in the dense regime this sampler does not cover."""


class PreconditionError(CliqueSamplerError, ValueError):
    pass
