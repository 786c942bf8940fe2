"""Quadratic control-affine systems ``x' = A x + N (x ⊗ x) + B u``, ``y = C x``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.errors import InvalidArgumentError


def symmetrize_rows(N: np.ndarray, n: int) -> np.ndarray:
    """Make every row of the ``n x n**2`` matrix ``N`` symmetric in its two indices.

    ``N @ kron(x, x)`` is unchanged.
    """
    tensor = np.asarray(N, dtype=np.float64).reshape(-1, n, n)
    return (0.5 * (tensor + tensor.transpose(0, 2, 1))).reshape(tensor.shape[0], n * n)


@dataclass(slots=True, frozen=True)
class PolySystem:
    """State-space matrices of a quadratic system.

    ``N`` is stored as ``n x n**2`` in row-major Kronecker order and its rows are
    symmetrized on construction, so ``N (x ⊗ y) == N (y ⊗ x)`` always holds.
    """

    A: np.ndarray
    N: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self) -> None:
        A = np.atleast_2d(np.asarray(self.A, dtype=np.float64))
        n = A.shape[0]
        if A.shape != (n, n):
            raise InvalidArgumentError(f"A must be square, got shape {A.shape}")
        N = np.asarray(self.N, dtype=np.float64)
        if N.size != n**3:
            raise InvalidArgumentError(f"N must have n*n**2 = {n**3} entries, got {N.size}")
        B = np.asarray(self.B, dtype=np.float64)
        C = np.asarray(self.C, dtype=np.float64)
        if B.size % n or C.size % n or B.size == 0 or C.size == 0:
            raise InvalidArgumentError(
                f"B ({B.shape}) and C ({C.shape}) are inconsistent with n={n}"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "N", symmetrize_rows(N.reshape(n, n * n), n))
        object.__setattr__(self, "B", B.reshape(n, -1))
        object.__setattr__(self, "C", C.reshape(-1, n))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]

    def drift(self, x: np.ndarray) -> np.ndarray:
        """``A x + N (x ⊗ x)``."""
        point = np.asarray(x, dtype=np.float64).reshape(-1)
        if point.size != self.n:
            raise InvalidArgumentError(f"Point has dimension {point.size}, system has n={self.n}")
        return self.A @ point + self.N @ np.kron(point, point)

    def without_quadratic(self) -> PolySystem:
        """The linearization (``N = 0``)."""
        return PolySystem(self.A, np.zeros_like(self.N), self.B, self.C)
