"""Exception types shared across the toolkit.

The CLI maps these onto its exit-code contract: ConfigError -> 1,
HypothesisViolationError -> 2, the numerical failures -> 3.
"""


class ConfigError(ValueError):
    """Malformed run configuration or domain-type invariant violation."""


class DecompositionError(ArithmeticError):
    """Matrix decomposition failed (singular / non-finite input)."""


class ReductionError(RuntimeError):
    """Fundamental-domain reduction did not converge.

    Carries the iteration trace when available.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class QuadratureError(RuntimeError):
    """A quadrature or Monte Carlo routine failed to reach its target."""


class TruncationError(RuntimeError):
    """Series truncation tail estimate exceeds the requested tolerance."""

    def __init__(self, message, tail_estimate=None):
        super().__init__(message)
        self.tail_estimate = tail_estimate


class HypothesisViolationError(RuntimeError):
    """A mathematical hypothesis of the certification theorems fails."""


class UnsupportedRankError(NotImplementedError):
    """Operation requested for a rank n outside {2, 3}."""
