"""
Error hierarchy for the formnet toolkit.
Every error carries the CLI exit code it maps to (2 invalid input, 3 numeric failure, 4 I/O or format).
"""

from typing import Optional


class FormnetError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


class InvalidInputError(FormnetError, ValueError):
    exit_code = 2


class InvalidIndexError(InvalidInputError):
    pass


class DomainError(InvalidInputError):
    pass


class InvalidShapeError(InvalidInputError):
    pass


class InvalidConfigError(InvalidInputError):
    pass


class InvalidSplitError(InvalidInputError):
    pass


class IdentifiabilityError(InvalidInputError):
    pass


class DegenerateChannelError(InvalidInputError):
    def __init__(self, message: str, channel: Optional[str] = None):
        super().__init__(message)
        self.channel = channel


class NumericFailureError(FormnetError, ArithmeticError):
    exit_code = 3

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step = step


class ConditioningError(NumericFailureError):
    def __init__(self, message: str, channel: Optional[int] = None):
        super().__init__(message)
        self.channel = channel


class DegenerateGainError(NumericFailureError):
    def __init__(self, message: str, channel: Optional[int] = None):
        super().__init__(message)
        self.channel = channel


class FormatError(FormnetError):
    exit_code = 4


class VersionMismatchError(FormatError):
    pass


class TruncatedFileError(FormatError):
    pass


class DigestMismatchError(FormatError):
    pass


class StageFailedError(FormnetError):
    """Pipeline stage failure; exit code follows the underlying cause."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"Stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)
