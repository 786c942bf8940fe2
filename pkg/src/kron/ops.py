"""Kronecker-product algebra on flat coefficient vectors.

Nothing here forms an ``n**k x n**k`` matrix or a full ``kron_power(x, k)`` unless
asked to: products are applied by reshaping to a three-way view
``(n**s, q, n**(d-1-s))`` and multiplying along the middle mode.
"""

from __future__ import annotations

from functools import lru_cache, reduce

import numpy as np

from src.errors import InvalidArgumentError
from src.kron.coefficients import CoeffVector, EnergyCoefficients


def kron_power(x: np.ndarray, k: int) -> np.ndarray:
    """Return ``x ⊗ x ⊗ ... ⊗ x`` with ``k`` factors."""
    vector = np.asarray(x, dtype=np.float64).reshape(-1)
    if k < 1:
        raise InvalidArgumentError(f"Kronecker power needs k >= 1, got {k}")
    if vector.size == 0:
        raise InvalidArgumentError("Kronecker power of an empty vector")
    return reduce(np.kron, [vector] * k)


@lru_cache(maxsize=8)
def _canonical_positions(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Map each position to the position of its sorted multi-index, plus group sizes."""
    index_dtype = np.min_scalar_type(max(n - 1, 1))
    indices = np.indices((n,) * k, dtype=index_dtype).reshape(k, -1)
    indices.sort(axis=0)
    keys = np.zeros(indices.shape[1], dtype=np.int64)
    for row in indices:
        keys = keys * n + row
    counts = np.bincount(keys, minlength=n**k)
    keys.setflags(write=False)
    counts.setflags(write=False)
    return keys, counts


def symmetrize(c: CoeffVector) -> CoeffVector:
    """Average the coefficients of every monomial over its permuted positions.

    The polynomial ``c.data @ kron_power(x, k)`` is unchanged; the result is the
    unique symmetric representative.
    """
    if c.k == 1:
        return c
    keys, counts = _canonical_positions(c.n, c.k)
    sums = np.bincount(keys, weights=c.data, minlength=c.data.size)
    return CoeffVector(c.n, c.k, sums[keys] / counts[keys])


def is_symmetric(c: CoeffVector, *, rtol: float = 1e-12) -> bool:
    scale = max(float(np.max(np.abs(c.data))), np.finfo(float).tiny)
    return bool(np.max(np.abs(symmetrize(c).data - c.data)) <= rtol * scale)


def kron_sum_apply(M: np.ndarray, v: np.ndarray, d: int, *, n: int | None = None) -> np.ndarray:
    """Apply the ``d``-way Kronecker sum ``L_d(M) = sum_s I ⊗ .. ⊗ M ⊗ .. ⊗ I``.

    Args:
        M: ``p x q`` matrix placed in one slot at a time; may be rectangular.
        v: Vector of length ``q * n**(d-1)``.
        d: Number of slots.
        n: Identity-slot dimension, defaults to ``q``.

    Returns:
        Vector of length ``p * n**(d-1)``.
    """
    matrix = np.asarray(M)
    if matrix.ndim != 2:
        raise InvalidArgumentError(f"Kronecker-sum factor must be a matrix, got ndim={matrix.ndim}")
    p, q = matrix.shape
    n = q if n is None else n
    vector = np.asarray(v).reshape(-1)
    if d < 1:
        raise InvalidArgumentError(f"Kronecker sum needs d >= 1, got {d}")
    if vector.size != q * n ** (d - 1):
        raise InvalidArgumentError(
            f"Vector length {vector.size} does not match q*n**(d-1) = {q * n ** (d - 1)}"
        )
    out = np.zeros(p * n ** (d - 1), dtype=np.result_type(matrix, vector))
    for slot in range(d):
        block = vector.reshape(n**slot, q, n ** (d - 1 - slot))
        out += (matrix @ block).reshape(-1)
    return out


def _check_point(ec: EnergyCoefficients, x: np.ndarray) -> np.ndarray:
    point = np.asarray(x, dtype=np.float64).reshape(-1)
    if point.size != ec.n:
        raise InvalidArgumentError(f"Point has dimension {point.size}, energy expects {ec.n}")
    return point


def poly_eval(ec: EnergyCoefficients, x: np.ndarray) -> float:
    """Evaluate ``1/2 * sum_k c_k @ kron_power(x, k)`` by successive contractions."""
    point = _check_point(ec, x)
    total = 0.0
    for k, vector in ec.coeffs.items():
        partial = vector.data
        for _ in range(k):
            partial = partial.reshape(-1, ec.n) @ point
        total += float(partial[0])
    return 0.5 * total


def poly_gradient(ec: EnergyCoefficients, x: np.ndarray) -> np.ndarray:
    """Gradient ``1/2 * sum_k k * mat(c_k) @ kron_power(x, k-1)``; needs symmetric c_k."""
    point = _check_point(ec, x)
    gradient = np.zeros(ec.n)
    for k, vector in ec.coeffs.items():
        partial = vector.data
        for _ in range(k - 1):
            partial = partial.reshape(-1, ec.n) @ point
        gradient += 0.5 * k * partial
    return gradient
