"""Exception types shared across the toolkit."""


class RTFError(Exception):
    """Base class for all toolkit errors."""


class CoprimalityError(RTFError):
    """An ideal meets a prime set it was required to avoid."""


class DomainError(RTFError):
    """Evaluation requested outside a declared domain."""


class NonRationalPower(RTFError):
    """norm(n)^t is irrational but exact arithmetic was requested."""


class SingularTau(RTFError):
    """tau(j,j) vanishes (Satake value on the boundary Q = +-1)."""


class InertViolation(RTFError):
    """A prime dividing the level is not inert for the quadratic character."""


class SignClassError(RTFError):
    """The level lies in the wrong sign class for the requested main term."""


class ConvergenceError(RTFError):
    """A numeric oracle failed its self-consistency refinement check."""


class TailTooLarge(RTFError):
    """A truncated lattice sum cannot meet the requested tolerance."""


class MissingOracle(RTFError):
    """An externally injected local integral value is required but absent."""


class UnsupportedField(RTFError):
    """Only the rational field and real quadratic fields are supported."""
