"""Exception hierarchy shared by all modules."""


class LodeInvError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LodeInvError, ValueError):
    """An operation was applied outside its domain (bad variable, zero divisor...)."""


class JetOrderLimitError(LodeInvError):
    """A configured jet-order or ansatz limit was exceeded."""


class ConfigurationError(LodeInvError):
    """Inconsistent configuration, e.g. a non-polynomial multiplier."""


class SamplingError(LodeInvError):
    """Every random sample hit a singularity."""


class ParseError(LodeInvError, ValueError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at offset {position}"
        super().__init__(message)


class UnknownVariableError(ParseError):
    pass
