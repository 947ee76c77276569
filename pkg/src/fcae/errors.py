"""Exception types raised across the package."""


class FCAEError(Exception):
    """Base class for all package errors."""


class DimensionError(FCAEError, ValueError):
    pass


class ParameterError(FCAEError, ValueError):
    pass


class InvalidOrderError(ParameterError):
    pass


class InvalidLengthError(ParameterError):
    pass


class DomainError(FCAEError, ValueError):
    pass


class DegenerateRangeError(FCAEError, ValueError):
    pass


class UndefinedReferenceError(FCAEError, ValueError):
    pass


class DivergenceError(FCAEError, RuntimeError):
    def __init__(self, epoch, loss):
        super().__init__(f"training diverged at epoch {epoch} (loss={loss})")
        self.epoch = epoch
        self.loss = loss


class IngestError(FCAEError, ValueError):
    def __init__(self, message, row=None, col=None):
        if row is not None:
            message = f"{message} (row {row}, column {col})"
        super().__init__(message)
        self.row = row
        self.col = col


class EmptyDatasetError(FCAEError, ValueError):
    pass


class ConfigError(FCAEError, ValueError):
    pass


class CheckpointError(FCAEError, ValueError):
    pass
