"""Exception types shared across the pipeline."""

from __future__ import annotations


class DataError(Exception):
    """Base class for problems with input data (CLI exit code 1)."""


class SchemaError(DataError):
    """A record file violates its line-delimited schema."""

    def __init__(self, path: str, line: int, field: str, message: str):
        self.path = path
        self.line = line
        self.field = field
        super().__init__(f"{path}:{line}: field '{field}': {message}")


class TrainingError(DataError):
    """Classifier training cannot proceed (e.g. a single-class dataset)."""


class FeaturizeError(DataError):
    """An utterance bundle cannot be turned into a feature vector."""
