"""
Exception hierarchy for Helion

Every error carries the process exit code the CLI reports for it.
"""

from typing import Optional


class HelionError(Exception):
    """Base class for all Helion errors"""

    exit_code = 1


class ConfigValidationError(HelionError):
    """Invalid configuration or violated precondition"""

    exit_code = 2


class DimensionError(ConfigValidationError, ValueError):
    """Operand shapes do not match"""


class NumericError(HelionError):
    """A numerical routine produced an unusable result"""

    exit_code = 3


class ConvergenceError(NumericError):
    """Iterative routine hit its iteration cap"""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class ConsistencyError(NumericError):
    """Two independent evaluations of the same quantity disagree"""


class StorageError(HelionError):
    """Reading or writing an artifact failed"""

    exit_code = 4

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(f"{message}: {path}" if path else message)
        self.path = path
