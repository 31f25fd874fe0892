"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed polynomial, digit-string or series text."""

    def __init__(self, message, text=None, position=None):
        if position is not None:
            message = f"{message} at position {position}"
            if text is not None:
                message += f": {text!r}"
        super().__init__(message)
        self.text = text
        self.position = position


class FieldError(ValueError):
    """Invalid field specification or coefficient out of range."""


class DigitSystemError(ValueError):
    """Base class for an invalid P/Q digit system."""


class ZeroBaseError(DigitSystemError):
    pass


class DegreeError(DigitSystemError):
    pass


class NotCoprimeError(DigitSystemError):
    pass


class BudgetExceeded(RuntimeError):
    """An enumeration or lazy state discovery would exceed its budget."""


class InsufficientPrecision(ValueError):
    """A truncated series does not determine the requested quantity."""


class NotAnEdge(ValueError):
    """The digit is not a label of an outgoing edge of the node."""


class NotProlongable(ValueError):
    pass


class ShapeError(ValueError):
    """A cone series does not have the shape of a digit expansion."""
