"""Exception hierarchy for hdunif."""


class HdunifError(Exception):
    """Base class for all hdunif errors."""


class DomainError(HdunifError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionMismatch(HdunifError, ValueError):
    """Vector/matrix dimensions do not agree."""


class ZeroVector(HdunifError, ValueError):
    """A zero vector cannot be projected onto the unit sphere."""


class QuadratureFailure(HdunifError, ArithmeticError):
    """Numerical integration (or a series) did not reach the requested tolerance
    within its node/term budget."""


class InfeasibleMoments(HdunifError, ValueError):
    """The requested (mean, variance) pair cannot be realized by a beta law."""


class DegenerateMoments(HdunifError, ValueError):
    """A moment appearing in a denominator is zero (point-mass projection law)."""


class DegenerateData(HdunifError, ValueError):
    """Data are degenerate for the requested statistic (e.g. zero total scatter)."""


class DataError(HdunifError):
    """Base class for errors raised while reading user data files."""


class MalformedCSV(DataError):
    """The CSV file is not a rectangular table of reals (with optional header,
    empty or 'NA' missing cells)."""


class AllMissingColumn(DataError):
    """A column has no observed entries, so its mean cannot be imputed."""


class IncompleteGrid(HdunifError, ValueError):
    """Plotting requires results covering a full (n, p) grid."""


class UsageError(HdunifError):
    """Bad command-line usage (maps to exit code 1)."""
