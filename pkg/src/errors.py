"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: argument problems exit with 1, numerical
failures with 2.
"""

from __future__ import annotations

from typing import Any

import numpy as np


class EnergyError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(EnergyError, ValueError):
    """Inputs are malformed: wrong shapes, degrees, ranges or config keys."""


class DomainError(InvalidArgumentError):
    """A closed-form expression was evaluated outside its real domain."""


class CoefficientFileError(EnergyError, ValueError):
    """A coefficient file is unreadable or violates the NLEF layout."""


class NumericalError(EnergyError, RuntimeError):
    """A numerical routine failed to converge or to meet its residual check."""


class SingularSystemError(NumericalError):
    """A shifted Kronecker-sum system is singular to working precision."""

    def __init__(self, message: str, *, multi_index: tuple[int, ...], shift: complex) -> None:
        super().__init__(message)
        self.multi_index = multi_index
        self.shift = shift


class SolvabilityError(NumericalError):
    """No stabilizing Riccati solution exists for the requested parameters."""

    def __init__(self, message: str, *, eigenvalues: Any = None) -> None:
        super().__init__(message)
        self.eigenvalues = None if eigenvalues is None else np.asarray(eigenvalues)


__all__ = [
    "CoefficientFileError",
    "DomainError",
    "EnergyError",
    "InvalidArgumentError",
    "NumericalError",
    "SingularSystemError",
    "SolvabilityError",
]
