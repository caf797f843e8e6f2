"""Shared exception types."""

from __future__ import annotations


class ToriscopeError(Exception):
    """Base class for all library errors."""


class DegenerateInputError(ToriscopeError, ValueError):
    """Input object is lower-dimensional than required."""


class NonPointedConeError(ToriscopeError, ValueError):
    """A cone that must be pointed contains a line.

    The ``witness`` attribute holds a nonzero integer vector ``v`` with
    both ``v`` and ``-v`` in the cone.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NonSimpleError(ToriscopeError, ValueError):
    """A polytope expected to be simple has a vertex on too many facets."""


class LimitsExceededError(ToriscopeError, RuntimeError):
    """A computation hit a configured size cap.

    ``partial`` carries whatever intermediate object was available when
    the cap was hit, for logging.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ParseError(ToriscopeError, ValueError):
    """Malformed text input; ``line`` is the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SplitHypothesesError(ToriscopeError, ValueError):
    """Hypotheses of a split-based check do not hold; lists the violations."""

    def __init__(self, violations):
        super().__init__("hypotheses violated: " + "; ".join(violations))
        self.violations = tuple(violations)
