"""Exception types raised across the package."""


class ScoresysError(Exception):
    """Base class for everything this package raises on purpose."""


class DataError(ScoresysError, ValueError):
    """Malformed cells, bad labels, or empty data."""


class DomainError(ScoresysError, ValueError):
    """Invalid coefficient domain or tier specification."""


class ConfigError(ScoresysError, ValueError):
    """Penalty/weight/budget settings outside their meaningful ranges."""


class ReportError(ScoresysError, ValueError):
    """Scoring-system analysis that cannot be produced (non-binary
    features, too many active features, unparseable sheet)."""


class VerifyError(ScoresysError, ValueError):
    """A solution file fails the exported model's constraints or its
    objective disagrees with the recomputed one.  Carries the list of
    violations as (name, detail) pairs."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)
