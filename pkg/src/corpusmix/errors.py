"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class CorpusmixError(Exception):
    exit_code = 2


class DataError(CorpusmixError, ValueError):
    """Malformed or missing input data (files, metadata, empty corpora)."""

    exit_code = 2


class DomainError(CorpusmixError, ValueError):
    """Well-formed input that the requested analysis cannot accept."""

    exit_code = 3


class UnknownTermError(DomainError, KeyError):
    def __init__(self, term, suggestions=()):
        self.term = term
        self.suggestions = list(suggestions)
        msg = f"term {term!r} not in vocabulary"
        if self.suggestions:
            msg += "; did you mean: " + ", ".join(self.suggestions)
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


class NumericalError(CorpusmixError, ArithmeticError):
    exit_code = 4
