"""Exception types shared across the package."""


class RadicandError(ValueError):
    """Bad radicand: d < 2, d a perfect square, or a mismatch between values."""


class ExprSyntaxError(ValueError):
    """Malformed field-element expression.  `position` is a 0-based char offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class HypothesisViolation(ValueError):
    """An irrationality hypothesis fails, so a theorem-backed formula would
    not be licensed.  For pairwise ratio failures, carries the offending
    1-based index pair and the exact rational ratio."""

    def __init__(self, message, j=None, k=None, ratio=None):
        super().__init__(message)
        self.j = j
        self.k = k
        self.ratio = ratio

    @classmethod
    def rational_ratio(cls, j, k, ratio):
        return cls(
            f"ratio a_{j}/a_{k} = {ratio} is rational; pairwise-irrational "
            f"hypothesis violated",
            j=j, k=k, ratio=ratio,
        )


class CrossingError(RuntimeError):
    """Base class for failures of the numeric crossing engine."""


class FlatCrossingError(CrossingError):
    """A local minimum of sigma_min sits in the ambiguous dead zone."""


class NonIsolatedCrossingError(CrossingError):
    """Two crossings closer than the isolation gap (or a singular plateau)."""


class DegenerateCrossingError(CrossingError):
    """A crossing form has an eigenvalue below the degeneracy tolerance."""


class NotACrossingError(CrossingError):
    """crossing_form was asked for a time where Psi_t - id is not singular."""
