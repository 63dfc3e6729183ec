"""
Exceptions raised by the meanscale library.

Every error is a ValueError so callers that only care about bad input can
catch the builtin; the CLI maps the classes below to exit codes.
"""
from typing import Optional


class MeanScaleError(ValueError):
    """Base class for all library errors."""


class OutOfDomain(MeanScaleError):
    """A value lies outside the open interval a map is defined on."""

    def __init__(self, value: float, domain: object, what: str = "value"):
        self.value = value
        self.domain = domain
        super().__init__(f"{what} {value!r} is outside the domain {domain}")


class NotMonotone(MeanScaleError):
    """Sampling found a direction change in a supposedly monotone map."""


class NonPositiveAlpha(MeanScaleError):
    """Radical generators need a strictly positive parameter."""


class DegenerateInterval(MeanScaleError):
    """An interval (a, b) with a >= b was supplied where a < b is required."""


class TargetOutOfInterval(MeanScaleError):
    """The prescribed midpoint does not lie strictly inside (a, b)."""


class BracketExhausted(MeanScaleError):
    """No sign change was found within the admissible parameter range."""


class ToleranceNotMet(MeanScaleError):
    """A refinement converged but its residual is above the requested tolerance."""


class EtaOutOfRange(MeanScaleError):
    """A dual coordinate lies outside the range of the potential's gradient."""


class QuadratureFailure(MeanScaleError):
    """Adaptive quadrature could not reach its tolerance within the subdivision cap."""


class Unrepresentable(MeanScaleError):
    """A result lies beyond the range of a double."""


class ExpressionError(MeanScaleError):
    """Base class for expression parsing and evaluation errors."""


class ExpressionSyntaxError(ExpressionError):
    """Malformed expression text; `offset` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int, text: Optional[str] = None):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnknownIdentifier(ExpressionError):
    """An identifier other than the variable or a known function was used."""

    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown identifier {name!r} at offset {offset}")


class DomainError(ExpressionError):
    """Evaluation left real arithmetic (log of non-positive, division by zero, ...)."""
