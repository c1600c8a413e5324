"""
Exception hierarchy shared by every fraudlab app
"""

# Exit-code contract of the management commands
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class FraudLabError(Exception):
    """Base class for all pipeline errors"""
    exit_code = EXIT_INTERNAL


class ConfigurationError(FraudLabError, ValueError):
    """Invalid run configuration, hyperparameter or generator setting"""
    exit_code = EXIT_DATA


class DatasetValidationError(FraudLabError, ValueError):
    """A dataset file or record violates the claim schema"""
    exit_code = EXIT_DATA

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f'row {row}')
        if column is not None:
            location.append(f'column {column!r}')
        if location:
            message = f'{", ".join(location)}: {message}'
        super().__init__(message)


class ModelFormatError(FraudLabError, ValueError):
    """A model file is unreadable, of the wrong kind or of another format version"""
    exit_code = EXIT_DATA


class TrainingError(FraudLabError, ValueError):
    """Training input cannot produce a model (empty set, degenerate labels, ...)"""
    exit_code = EXIT_DATA


class EvaluationError(FraudLabError, ValueError):
    """Evaluation input is inconsistent (length mismatch, single class, ...)"""
    exit_code = EXIT_DATA
