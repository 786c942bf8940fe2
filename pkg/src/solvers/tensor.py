"""k-way Bartels-Stewart solver for shifted Kronecker-sum systems.

Solves ``[L_k(A^T) + I_{n^(k-1)} ⊗ M] v = b`` where the shift ``M`` acts on the last
(fastest varying) slot of the row-major layout.

Procedure:
    1. Complex Schur form ``A^T = U T U*``. The first k-1 slots become triangular.
    2. The last slot carries ``T + U* M U``; a second complex Schur form
       ``T + U* M U = Q R Q*`` makes it triangular too, so every diagonal block of
       the transformed system is triangular.
       A dense LU of each shifted block would also work; the second Schur form keeps
       the degree-k cost at O(n^(k+1)) instead.
    3. Back-substitution over the leading k-2 indices in reverse lexicographic order,
       finishing each two-slot block with a triangular Sylvester solve (LAPACK trsyl).
    4. Transform back and drop the imaginary residue.

Usage:
    from src.solvers.tensor import ShiftedKronSystem, solve_shifted_kron_system

    v = solve_shifted_kron_system(ShiftedKronSystem(A=A, M=M, k=3, b=b))
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
from scipy.linalg import LinAlgError, get_lapack_funcs, schur

from src.errors import InvalidArgumentError, NumericalError, SingularSystemError
from src.kron.ops import kron_sum_apply

logger = logging.getLogger(__name__)

CONDITION_LIMIT: Final = 1e12
IMAG_TOL: Final = 1e-8


@dataclass(slots=True, frozen=True)
class SchurFactorization:
    """Complex Schur form ``A^T = U @ T @ U.conj().T``."""

    U: np.ndarray
    T: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.diag(self.T)


@dataclass(slots=True, frozen=True)
class ShiftedKronSystem:
    """The linear system ``[L_k(A^T) + I ⊗ M] v = b``."""

    A: np.ndarray
    M: np.ndarray
    k: int
    b: np.ndarray

    def __post_init__(self) -> None:
        A = np.asarray(self.A, dtype=np.float64)
        M = np.asarray(self.M, dtype=np.float64)
        b = np.asarray(self.b, dtype=np.float64).reshape(-1)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidArgumentError(f"A must be square, got shape {A.shape}")
        if M.shape != A.shape:
            raise InvalidArgumentError(f"M must have shape {A.shape}, got {M.shape}")
        if self.k < 2:
            raise InvalidArgumentError(f"Tensor order must be at least 2, got {self.k}")
        if b.size != A.shape[0] ** self.k:
            raise InvalidArgumentError(
                f"Right-hand side has length {b.size}, expected n**k = {A.shape[0] ** self.k}"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Matrix-free product of the system operator with ``v``."""
        n = self.n
        shifted = (np.asarray(v).reshape(-1, n) @ self.M.T).reshape(-1)
        return kron_sum_apply(self.A.T, v, self.k) + shifted

    def relative_residual(self, v: np.ndarray) -> float:
        scale = max(float(np.linalg.norm(self.b)), np.finfo(float).tiny)
        return float(np.linalg.norm(self.apply(v) - self.b)) / scale


@dataclass(slots=True)
class _BlockContext:
    trsyl: Any
    last_factor: np.ndarray
    operator_scale: float
    condition_limit: float


def schur_decompose(A: np.ndarray) -> SchurFactorization:
    """Complex Schur factorization of ``A^T``; eigenvalues of ``A`` land on ``diag(T)``."""
    matrix = np.asarray(A, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidArgumentError(f"Schur factorization needs a square matrix, got {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidArgumentError("Schur factorization input contains non-finite entries")
    try:
        T, U = schur(matrix.T, output="complex")
    except LinAlgError as exc:
        raise NumericalError(f"Schur factorization did not converge: {exc}") from exc
    return SchurFactorization(U=U, T=T)


def _apply_slotwise(factors: list[np.ndarray], b: np.ndarray) -> np.ndarray:
    """Apply ``factors[0] ⊗ ... ⊗ factors[-1]`` to ``b`` one slot at a time."""
    n = factors[0].shape[0]
    x = np.asarray(b).reshape(-1)
    if x.size != n ** len(factors):
        raise InvalidArgumentError(
            f"Vector length {x.size} does not match n**k = {n ** len(factors)}"
        )
    # Each pass contracts the leading slot and rotates it to the back.
    for factor in factors:
        x = (factor @ x.reshape(n, -1)).T.reshape(-1)
    return x


def kron_power_multiply(
    U: np.ndarray, k: int, b: np.ndarray, adjoint: bool = False
) -> np.ndarray:
    """Return ``(U^{⊗k}) b`` or ``(U^{⊗k})* b`` without forming the Kronecker power."""
    matrix = np.asarray(U)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidArgumentError(f"U must be square, got shape {matrix.shape}")
    if k < 1:
        raise InvalidArgumentError(f"Kronecker order must be positive, got {k}")
    factor = matrix.conj().T if adjoint else matrix
    return _apply_slotwise([factor] * k, b)


def solve_shifted_kron_system(
    system: ShiftedKronSystem,
    *,
    schur_factor: SchurFactorization | None = None,
    condition_limit: float = CONDITION_LIMIT,
    imag_tol: float = IMAG_TOL,
) -> np.ndarray:
    """Solve ``[L_k(A^T) + I ⊗ M] v = b`` by k-way Bartels-Stewart.

    Args:
        system: The shifted Kronecker-sum system.
        schur_factor: Reusable factorization of ``system.A``; computed when omitted.
        condition_limit: Largest accepted ratio of operator scale to the smallest
            eigenvalue modulus of a diagonal block.
        imag_tol: Relative imaginary residue above which a warning is logged.

    Returns:
        The real solution vector of length ``n**k``.
    """
    n, k = system.n, system.k
    factor = schur_factor if schur_factor is not None else schur_decompose(system.A)
    U, T = factor.U, factor.T
    if np.any(system.M):
        try:
            R, Q = schur(T + U.conj().T @ system.M @ U, output="complex")
        except LinAlgError as exc:
            raise NumericalError(f"Schur factorization of the shifted block failed: {exc}") from exc
        last = U @ Q
    else:
        R, last = T, U

    rhs = _apply_slotwise([U.conj().T] * (k - 1) + [last.conj().T], system.b)
    (trsyl,) = get_lapack_funcs(("trsyl",), (T, R, rhs))
    context = _BlockContext(
        trsyl=trsyl,
        last_factor=R,
        operator_scale=(k - 1) * float(np.linalg.norm(T)) + float(np.linalg.norm(R)),
        condition_limit=condition_limit,
    )
    transformed = _solve_block(T, rhs.reshape((n,) * k), 0.0, (), context)
    solution = _apply_slotwise([U] * (k - 1) + [last], transformed.reshape(-1))

    real_norm = float(np.linalg.norm(solution.real))
    imag_norm = float(np.linalg.norm(solution.imag))
    if imag_norm > imag_tol * max(real_norm, np.finfo(float).tiny):
        logger.warning(
            "Tensor solve (n=%d, k=%d) left imaginary residue %.2e relative to %.2e",
            n,
            k,
            imag_norm,
            real_norm,
        )
    return solution.real.copy()


def _solve_block(
    T: np.ndarray,
    rhs: np.ndarray,
    shift: complex,
    prefix: tuple[int, ...],
    context: _BlockContext,
) -> np.ndarray:
    if rhs.ndim == 2:
        return _solve_sylvester_block(T, rhs, shift, prefix, context)
    n = T.shape[0]
    out = np.empty_like(rhs)
    for i in reversed(range(n)):
        reduced = rhs[i]
        if i + 1 < n:
            reduced = reduced - np.tensordot(T[i, i + 1 :], out[i + 1 :], axes=1)
        out[i] = _solve_block(T, reduced, shift + T[i, i], prefix + (i,), context)
    return out


def _solve_sylvester_block(
    T: np.ndarray,
    rhs: np.ndarray,
    shift: complex,
    prefix: tuple[int, ...],
    context: _BlockContext,
) -> np.ndarray:
    """Solve ``(T + shift I) X + X R^T = rhs`` with both factors upper triangular."""
    R = context.last_factor
    sums = shift + np.diag(T)[:, None] + np.diag(R)[None, :]
    moduli = np.abs(sums)
    i, j = np.unravel_index(int(np.argmin(moduli)), moduli.shape)
    if moduli[i, j] * context.condition_limit <= context.operator_scale:
        raise SingularSystemError(
            f"Shifted Kronecker system is singular at multi-index {prefix + (int(i), int(j))} "
            f"(diagonal shift {sums[i, j]:.3e}, operator scale {context.operator_scale:.3e})",
            multi_index=prefix + (int(i), int(j)),
            shift=complex(sums[i, j]),
        )
    a = T + shift * np.eye(T.shape[0])
    # op(B) = B^H with B = conj(R) gives R^T.
    y, scale, info = context.trsyl(a, R.conj(), rhs, tranb="C")
    if info < 0:
        raise NumericalError(f"trsyl rejected argument {-info}")
    if info == 1:
        raise SingularSystemError(
            f"trsyl perturbed nearly singular block at multi-index {prefix}",
            multi_index=prefix,
            shift=complex(shift),
        )
    return y / scale
