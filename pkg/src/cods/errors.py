"""Exception and warning types shared across the package."""

from __future__ import annotations


class CodsError(Exception):
    """Base class for every error raised by this package."""


class PredicateSyntaxError(CodsError):
    """Malformed model or training text, with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class KnowledgeBaseError(CodsError):
    """Invalid knowledge base (duplicate block ids, empty block list, bad block id)."""


class SearchError(CodsError):
    """Search cannot run (empty inputs, exceeded enumeration cap, bad parameters)."""


class CodegenError(CodsError):
    """Contradictory code predicates (e.g. two initial states for one class)."""


class ProjectError(CodsError):
    """Project-level usage error (bad paths, wrong number of inputs)."""


class PipelineError(CodsError):
    """A workflow step was invoked before its prerequisites exist."""


class LintWarning(UserWarning):
    """Suspicious but accepted input (placeholders in models, unbound targets)."""
