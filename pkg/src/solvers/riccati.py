"""H∞ algebraic Riccati equations seeding the quadratic energy coefficients.

Future energy:  0 = A^T W + W A + C^T C - eta W B B^T W,   A - eta B B^T W stable.
Past energy:    V = Y^{-1} with 0 = A Y + Y A^T + B B^T - eta Y C^T C Y,
                A - eta Y C^T C stable.

Both are solved from an invariant subspace of the Hamiltonian matrix (ordered real
Schur form) followed by one Newton defect-correction step. ``eta = 0`` reduces to
Lyapunov equations for the open-loop Gramians.

When the filter equation for ``Y`` has no stabilizing solution (an unstable mode that
the outputs cannot see), V2 is taken directly as the anti-stabilizing solution of
``A^T V + V A + V B B^T V - eta C^T C = 0``, i.e. ``A + B B^T V`` anti-stable. It
coincides with ``Y^{-1}`` whenever ``Y`` exists and vanishes on the unseen unstable
modes otherwise.

Usage:
    from src.solvers.riccati import AreProblem, solve_future_are

    W2 = solve_future_are(AreProblem(A, B, C, eta=0.5)).X
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Final, Literal

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigvalsh, schur, solve
from scipy.linalg import solve_continuous_lyapunov

from src.errors import InvalidArgumentError, NumericalError, SolvabilityError

logger = logging.getLogger(__name__)

INVERSION_CONDITION_WARNING: Final = 1e10
SUBSPACE_CONDITION_LIMIT: Final = 1e12
STABILITY_MARGIN: Final = 0.0
SEMIDEFINITE_RATIO: Final = 1e-10


@dataclass(slots=True, frozen=True)
class AreProblem:
    """System matrices and the gain parameter ``eta = 1 - gamma**-2``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    eta: float

    def __post_init__(self) -> None:
        A = np.atleast_2d(np.asarray(self.A, dtype=np.float64))
        B = np.asarray(self.B, dtype=np.float64)
        C = np.asarray(self.C, dtype=np.float64)
        n = A.shape[0]
        if A.shape != (n, n):
            raise InvalidArgumentError(f"A must be square, got shape {A.shape}")
        B = B.reshape(n, -1)
        C = C.reshape(-1, n)
        if not math.isfinite(self.eta) or self.eta > 1.0:
            raise InvalidArgumentError(f"eta must be finite and at most 1, got {self.eta}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "eta", float(self.eta))

    @property
    def gamma(self) -> float:
        return gamma_from_eta(self.eta)


@dataclass(slots=True)
class AreSolution:
    """Riccati solution with its diagnostics."""

    X: np.ndarray
    residual: float
    closed_loop_eigenvalues: np.ndarray
    warnings: list[str] = field(default_factory=list)


def gamma_from_eta(eta: float) -> float:
    """``gamma = 1 / sqrt(1 - eta)``; ``eta = 1`` maps to infinity."""
    if eta > 1.0:
        raise InvalidArgumentError(f"eta must be at most 1, got {eta}")
    return math.inf if eta == 1.0 else 1.0 / math.sqrt(1.0 - eta)


def eta_from_gamma(gamma: float) -> float:
    """``eta = 1 - gamma**-2``; ``gamma = inf`` maps to 1."""
    if gamma <= 0:
        raise InvalidArgumentError(f"gamma must be positive, got {gamma}")
    return 1.0 if math.isinf(gamma) else 1.0 - gamma**-2


def _symmetric(X: np.ndarray) -> np.ndarray:
    return 0.5 * (X + X.T)


def _care_residual(A: np.ndarray, G: np.ndarray, Q: np.ndarray, X: np.ndarray) -> np.ndarray:
    return A.T @ X + X @ A - X @ G @ X + Q


def _subspace_care(
    A: np.ndarray, G: np.ndarray, Q: np.ndarray, half_plane: Literal["lhp", "rhp"] = "lhp"
) -> np.ndarray:
    """Solve ``A^T X + X A - X G X + Q = 0``.

    ``half_plane="lhp"`` returns the stabilizing solution (``A - G X`` Hurwitz),
    ``"rhp"`` the anti-stabilizing one (``-(A - G X)`` Hurwitz).
    """
    n = A.shape[0]
    hamiltonian = np.block([[A, -G], [-Q, -A.T]])
    try:
        _, Z, sdim = schur(hamiltonian, output="real", sort=half_plane)
    except LinAlgError as exc:
        raise NumericalError(f"Hamiltonian Schur factorization failed: {exc}") from exc
    which = "stable" if half_plane == "lhp" else "anti-stable"
    if sdim != n:
        raise SolvabilityError(
            f"Hamiltonian has {sdim} {which} eigenvalues, expected {n}; "
            f"no {which.replace('stable', 'stabilizing')} Riccati solution",
            eigenvalues=np.linalg.eigvals(hamiltonian),
        )
    U1, U2 = Z[:n, :n], Z[n:, :n]
    if np.linalg.cond(U1) > SUBSPACE_CONDITION_LIMIT:
        raise SolvabilityError(
            f"{which.capitalize()} invariant subspace is not a graph; no Riccati solution",
            eigenvalues=np.linalg.eigvals(hamiltonian),
        )
    X = _symmetric(solve(U1.T, U2.T).T)

    # One Newton step: (A - G X)^T D + D (A - G X) = -R(X).
    residual = _care_residual(A, G, Q, X)
    closed_loop = A - G @ X
    try:
        correction = solve_continuous_lyapunov(closed_loop.T, -residual)
    except (LinAlgError, ValueError) as exc:
        logger.warning("Newton polish skipped: %s", exc)
        return X
    polished = _symmetric(X + correction)
    if np.linalg.norm(_care_residual(A, G, Q, polished)) <= np.linalg.norm(residual):
        return polished
    logger.warning("Newton polish increased the Riccati residual; keeping subspace solution")
    return X


def _require_stable(matrix: np.ndarray, what: str) -> np.ndarray:
    eigenvalues = np.linalg.eigvals(matrix)
    if eigenvalues.size and np.max(eigenvalues.real) >= STABILITY_MARGIN:
        raise SolvabilityError(f"{what} is not Hurwitz", eigenvalues=eigenvalues)
    return eigenvalues


def _scaled_residual(residual: np.ndarray, A: np.ndarray, X: np.ndarray, Q: np.ndarray) -> float:
    scale = np.linalg.norm(A) * np.linalg.norm(X) + np.linalg.norm(Q)
    return float(np.linalg.norm(residual) / max(scale, np.finfo(float).tiny))


def _check_gain(problem: AreProblem) -> None:
    """Reject ``gamma <= gamma_hat - 1``; skipped when the bound cannot be formed."""
    try:
        gamma_hat, (lower, _) = gamma_lower_bound(problem.A, problem.B, problem.C)
    except SolvabilityError as exc:
        logger.warning("Gain check skipped, standard Riccati equations unsolvable: %s", exc)
        return
    if problem.gamma <= lower:
        raise SolvabilityError(
            f"gamma={problem.gamma:.6g} is below the admissible bound {lower:.6g} "
            f"(estimate {gamma_hat:.6g})"
        )


def solve_future_are(problem: AreProblem, *, check_gamma: bool = True) -> AreSolution:
    """Stabilizing solution W2 of ``A^T W + W A + C^T C - eta W B B^T W = 0``.

    Args:
        problem: System matrices and ``eta``.
        check_gamma: For ``eta`` in (0, 1), reject gains at or below the lower end of
            the computable bracket around the optimal H∞ gain. Systems whose standard
            Riccati equations are unsolvable have no bracket; the check is then skipped
            with a warning.

    Returns:
        The solution; ``A - eta B B^T W2`` is Hurwitz.
    """
    A, B, C, eta = problem.A, problem.B, problem.C, problem.eta
    Q = C.T @ C
    if check_gamma and 0.0 < eta < 1.0:
        _check_gain(problem)
    if eta == 0.0:
        eigenvalues = _require_stable(A, "A (open-loop Lyapunov limit)")
        W = _symmetric(solve_continuous_lyapunov(A.T, -Q))
    else:
        G = eta * (B @ B.T)
        W = _subspace_care(A, G, Q)
        eigenvalues = _require_stable(A - G @ W, "A - eta B B^T W2")
    residual = A.T @ W + W @ A + Q - eta * W @ B @ B.T @ W
    return AreSolution(
        X=W,
        residual=_scaled_residual(residual, A, W, Q),
        closed_loop_eigenvalues=eigenvalues,
    )


def solve_past_are(problem: AreProblem) -> AreSolution:
    """V2 with ``A^T V + V A - eta C^T C + V B B^T V = 0``, built as ``Y^{-1}``.

    ``Y`` is the stabilizing solution of ``A Y + Y A^T + B B^T - eta Y C^T C Y = 0``.
    Without one, V2 is the anti-stabilizing solution of the past equation itself and
    is only positive semidefinite. With ``B = 0`` the quadratic term vanishes and V2
    solves a Lyapunov equation.

    Returns:
        The solution; ``closed_loop_eigenvalues`` are those of ``-(A + B B^T V2)``,
        which equal those of ``A - eta Y C^T C`` and lie in the left half-plane.
    """
    A, B, C, eta = problem.A, problem.B, problem.C, problem.eta
    BB = B @ B.T
    CC = C.T @ C
    warnings: list[str] = []
    if not np.any(BB):
        eigenvalues = _require_stable(A, "A (input-free Lyapunov limit)")
        V = _symmetric(solve_continuous_lyapunov(A.T, eta * CC))
    elif eta == 0.0:
        eigenvalues = _require_stable(A, "A (open-loop Lyapunov limit)")
        Y = _symmetric(solve_continuous_lyapunov(A, -BB))
        V, note = _invert_gramian(Y)
        if note:
            warnings.append(note)
    else:
        try:
            Y = _subspace_care(A.T, eta * CC, BB)
            eigenvalues = _require_stable(A - eta * Y @ CC, "A - eta Y C^T C")
            V, note = _invert_gramian(Y)
            if note:
                warnings.append(note)
        except SolvabilityError as exc:
            logger.info("Filter Riccati route failed (%s); solving for V2 directly", exc)
            V, eigenvalues = _anti_stabilizing_past(A, BB, eta * CC)
            warnings.extend(_semidefinite_note(V))
    for note in warnings:
        logger.warning(note)
    residual = A.T @ V + V @ A - eta * CC + V @ BB @ V
    return AreSolution(
        X=V,
        residual=_scaled_residual(residual, A, V, CC),
        closed_loop_eigenvalues=eigenvalues,
        warnings=warnings,
    )


def _anti_stabilizing_past(
    A: np.ndarray, BB: np.ndarray, Q: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    # X = -V solves A^T X + X A - X BB X + Q = 0 with A - BB X anti-stable.
    V = -_subspace_care(A, BB, Q, half_plane="rhp")
    eigenvalues = _require_stable(-(A + BB @ V), "-(A + B B^T V2)")
    return V, eigenvalues


def _semidefinite_note(V: np.ndarray) -> list[str]:
    spectrum = eigvalsh(V)
    top = max(abs(spectrum[-1]), np.finfo(float).tiny)
    if spectrum[0] < -SEMIDEFINITE_RATIO * top:
        raise SolvabilityError("Past-energy coefficient V2 is indefinite", eigenvalues=spectrum)
    flat = int(np.sum(spectrum <= SEMIDEFINITE_RATIO * top))
    if flat:
        return [f"V2 is singular along {flat} direction(s) (unobserved unstable modes)"]
    return []


def _invert_gramian(Y: np.ndarray) -> tuple[np.ndarray, str | None]:
    spectrum = eigvalsh(Y)
    if spectrum[0] <= 0.0:
        raise SolvabilityError(
            "Past-energy Riccati solution Y is singular or indefinite", eigenvalues=spectrum
        )
    try:
        factor = cho_factor(Y)
    except LinAlgError as exc:
        raise SolvabilityError(
            f"Cholesky factorization of Y failed: {exc}", eigenvalues=spectrum
        ) from exc
    V = _symmetric(cho_solve(factor, np.eye(Y.shape[0])))
    condition = spectrum[-1] / spectrum[0]
    note = None
    if condition > INVERSION_CONDITION_WARNING:
        note = f"Inverting an ill-conditioned Y (condition {condition:.2e})"
    return V, note


def gamma_lower_bound(
    A: np.ndarray, B: np.ndarray, C: np.ndarray
) -> tuple[float, tuple[float, float]]:
    """Computable estimate ``sqrt(1 + lambda_max(X Y))`` of the optimal H∞ gain.

    ``X`` and ``Y`` are the stabilizing solutions of the standard control and filter
    Riccati equations (quadratic terms with unit weight).

    Returns:
        The estimate and the bracket ``(estimate - 1, estimate + 1)``.

    Raises:
        SolvabilityError: if either standard equation has no stabilizing solution.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    n = A.shape[0]
    B = np.asarray(B, dtype=np.float64).reshape(n, -1)
    C = np.asarray(C, dtype=np.float64).reshape(-1, n)
    BB, CC = B @ B.T, C.T @ C
    X = _subspace_care(A, BB, CC)
    _require_stable(A - BB @ X, "A - B B^T X")
    Y = _subspace_care(A.T, CC, BB)
    _require_stable(A - Y @ CC, "A - Y C^T C")
    spectrum = np.linalg.eigvals(X @ Y).real
    estimate = math.sqrt(1.0 + max(float(np.max(spectrum)), 0.0))
    return estimate, (estimate - 1.0, estimate + 1.0)
