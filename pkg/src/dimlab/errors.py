"""Exception taxonomy. DomainError maps to CLI exit code 1, UsageError to 2."""


class DimlabError(Exception):
    """Base class for all dimlab errors."""


class DomainError(DimlabError):
    """A well-formed request that cannot be satisfied (exit code 1)."""


class HorizonError(DomainError):
    """Read past a prefix oracle's horizon."""


class FormatError(DomainError):
    """Malformed file, stream, or record."""


class SearchExhausted(DomainError):
    """Extension search ran out of candidates; parameters too tight, not a bug."""

    def __init__(self, message: str, hint: str = ""):
        super().__init__(message)
        self.hint = hint


class UsageError(DimlabError):
    """Bad flags or configuration (exit code 2)."""
