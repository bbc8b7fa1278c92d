"""Exception types shared across the package."""


class CasemarkError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CasemarkError):
    """A malformed line in an input file; carries the file and line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class CorpusError(CasemarkError):
    """Inconsistent corpus data: bounds violations, unknown versions, overlaps."""


class ConfigurationError(CasemarkError):
    """A run configuration that cannot be executed (missing files, bad pairs)."""


class UndefinedOddsError(ValueError):
    """Odds ratio 0/0: the contingency table carries no direction at all."""
