"""Exception hierarchy shared by all polyparam modules."""


class PolyParamError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(PolyParamError, ValueError):
    """Arity or dimension mismatch."""


class VariableError(PolyParamError, KeyError):
    """Unknown or malformed variable name."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class DomainError(PolyParamError, ValueError):
    """Argument outside the domain of an operation."""


class ResourceError(PolyParamError, RuntimeError):
    """A configured enumeration or search cap was exceeded."""


class UndecidedError(PolyParamError):
    """Membership cannot be decided for this point (outside a declared window)."""


class WitnessNotFound(PolyParamError, LookupError):
    """Bounded search gave up. This is not a proof that the target is missing."""


class IntegralityError(PolyParamError, AssertionError):
    """A result that must have integer coefficients did not."""


class ParseError(PolyParamError, ValueError):
    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(self.render())

    def render(self) -> str:
        if self.pos < 0:
            return self.message
        return f"{self.message} at position {self.pos}\n  {self.text}\n  {' ' * self.pos}^"
