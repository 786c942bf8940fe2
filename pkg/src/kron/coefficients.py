"""Coefficient containers for homogeneous polynomials and energy functions.

A degree-k coefficient vector stores the polynomial ``c @ kron_power(x, k)`` with
entries in lexicographic (row-major) multi-index order: the multi-index
``(i1, ..., ik)`` (zero based) lives at ``sum(i_j * n**(k - j))``. Reshaping the
vector to ``(n,) * k`` in C order recovers the coefficient tensor. This ordering
is part of the NLEF file format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)

import numpy as np

from src.errors import InvalidArgumentError


class EnergyKind(StrEnum):
    """Which energy function a coefficient set approximates."""

    PAST = "past"
    FUTURE = "future"


@dataclass(slots=True, frozen=True)
class CoeffVector:
    """Dense degree-``k`` coefficient vector of length ``n**k``."""

    n: int
    k: int
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 1:
            raise InvalidArgumentError(f"n and k must be positive, got n={self.n}, k={self.k}")
        data = np.asarray(self.data, dtype=np.float64).reshape(-1)
        if data.size != self.n**self.k:
            raise InvalidArgumentError(
                f"Coefficient length {data.size} does not match n**k = {self.n**self.k}"
            )
        object.__setattr__(self, "data", data)

    def tensor(self) -> np.ndarray:
        """Coefficient tensor view of shape ``(n,) * k``."""
        return self.data.reshape((self.n,) * self.k)

    def matrix(self) -> np.ndarray:
        """Row-major ``n x n**(k-1)`` matricization used by gradients and RHS terms."""
        return self.data.reshape(self.n, -1)


@dataclass(slots=True)
class EnergyCoefficients:
    """Polynomial energy ``E(x) = 1/2 * sum_k c_k @ kron_power(x, k)`` for k = 2..d."""

    n: int
    eta: float
    kind: EnergyKind
    coeffs: dict[int, CoeffVector] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.kind = EnergyKind(self.kind)
        if 2 not in self.coeffs:
            raise InvalidArgumentError("Energy coefficients need a quadratic term (k=2)")
        expected = list(range(2, max(self.coeffs) + 1))
        if sorted(self.coeffs) != expected:
            raise InvalidArgumentError(
                f"Degrees must be contiguous from 2, got {sorted(self.coeffs)}"
            )
        for k, vector in self.coeffs.items():
            if vector.k != k or vector.n != self.n:
                raise InvalidArgumentError(
                    f"Coefficient stored under k={k} has n={vector.n}, k={vector.k}"
                )

    @property
    def d(self) -> int:
        return max(self.coeffs)

    def vector(self, k: int) -> np.ndarray:
        return self.coeffs[k].data

    def quadratic(self) -> np.ndarray:
        """The ``n x n`` matrix W2 (future) or V2 (past)."""
        return self.coeffs[2].data.reshape(self.n, self.n)

    def truncate(self, d: int) -> EnergyCoefficients:
        """Drop every degree above ``d``.

        Lower-degree coefficients never depend on higher ones, so the truncation of a
        degree-6 result equals a fresh degree-``d`` computation.
        """
        if not 2 <= d <= self.d:
            raise InvalidArgumentError(f"Cannot truncate degree {self.d} energy to d={d}")
        kept = {k: vector for k, vector in self.coeffs.items() if k <= d}
        return EnergyCoefficients(n=self.n, eta=self.eta, kind=self.kind, coeffs=kept)
