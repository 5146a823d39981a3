# fptclock/errors.py

from typing import Optional

from fptclock.constants import ExitCode


class FptError(Exception):
    """Base class for every error raised by fptclock."""

    exit_code = ExitCode.VALIDATION

    def __init__(self, message: str, *, scenario_index: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.scenario_index = scenario_index

    def __str__(self) -> str:
        if self.scenario_index is None:
            return self.message
        return f"scenario {self.scenario_index}: {self.message}"


class DomainError(FptError, ValueError):
    exit_code = ExitCode.VALIDATION


class GridFormatError(FptError, ValueError):
    exit_code = ExitCode.VALIDATION


class AssumptionError(FptError, ValueError):
    exit_code = ExitCode.ASSUMPTION


class SaturationError(FptError, ArithmeticError):
    exit_code = ExitCode.NUMERICAL


class ConvergenceError(FptError, RuntimeError):
    exit_code = ExitCode.NUMERICAL


__all__ = [
    "FptError",
    "DomainError",
    "GridFormatError",
    "AssumptionError",
    "SaturationError",
    "ConvergenceError",
]
