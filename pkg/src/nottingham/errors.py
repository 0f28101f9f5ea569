"""Exception hierarchy shared by every module.

The CLI maps these onto its stable exit codes, so each class is a
``ValueError`` subclass with a single well-defined meaning.
"""


class NottinghamError(ValueError):
    """Base class for all library errors."""


class ModulusError(NottinghamError):
    """The modulus is not a supported prime."""


class CompatibilityError(NottinghamError):
    """Two series with different ``p`` or precision were combined."""


class MembershipError(NottinghamError):
    """A series does not lie in the filtration or subgroup it was tested against."""


class PrecisionError(NottinghamError):
    """The working precision cannot expose the requested exponent."""


class HorizonError(NottinghamError):
    """A membership query exceeded the horizon of an index set."""


class SeriesSyntaxError(NottinghamError):
    """Series text does not match the grammar."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}:\n  {text}\n  {' ' * position}^")


class BudgetExhausted(NottinghamError):
    """An iterative construction ran out of steps; ``trace`` records what happened."""

    def __init__(self, message: str, trace: list):
        self.trace = trace
        super().__init__(message)
