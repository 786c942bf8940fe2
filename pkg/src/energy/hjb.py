"""HJB residuals and the feedback law induced by a polynomial energy function."""

from __future__ import annotations

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from src.energy.system import PolySystem
from src.errors import InvalidArgumentError
from src.kron import EnergyCoefficients, EnergyKind, poly_gradient


def _check_dimensions(system: PolySystem, ec: EnergyCoefficients) -> None:
    if system.n != ec.n:
        raise InvalidArgumentError(f"System has n={system.n}, energy has n={ec.n}")


def hjb_residual(system: PolySystem, ec: EnergyCoefficients, x: np.ndarray) -> float:
    """Left-hand side of the HJB equation selected by ``ec.kind`` at ``x``.

    future: ``dE f - eta/2 |B^T dE|^2 + 1/2 |C x|^2``
    past:   ``dE f + 1/2 |B^T dE|^2 - eta/2 |C x|^2``
    """
    _check_dimensions(system, ec)
    point = np.asarray(x, dtype=np.float64).reshape(-1)
    gradient = poly_gradient(ec, point)
    drift = float(gradient @ system.drift(point))
    control = float(np.sum((system.B.T @ gradient) ** 2))
    output = float(np.sum((system.C @ point) ** 2))
    if ec.kind is EnergyKind.FUTURE:
        return drift - 0.5 * ec.eta * control + 0.5 * output
    return drift + 0.5 * control - 0.5 * ec.eta * output


def hjb_residuals(system: PolySystem, ec: EnergyCoefficients, points: np.ndarray) -> np.ndarray:
    """:func:`hjb_residual` for every row of ``points``."""
    rows = np.atleast_2d(np.asarray(points, dtype=np.float64))
    return np.array([hjb_residual(system, ec, row) for row in rows])


def feedback_control(
    system: PolySystem,
    ec: EnergyCoefficients,
    x: np.ndarray,
    R: np.ndarray | None = None,
) -> np.ndarray:
    """Feedback ``u = -R^{-1} B^T grad E(x)`` from a future energy function.

    Args:
        system: The controlled system.
        ec: Future energy coefficients.
        x: State.
        R: Symmetric positive definite ``m x m`` input weight, identity by default.
    """
    _check_dimensions(system, ec)
    if ec.kind is not EnergyKind.FUTURE:
        raise InvalidArgumentError("Feedback control needs future energy coefficients")
    weight = np.eye(system.m) if R is None else np.atleast_2d(np.asarray(R, dtype=np.float64))
    if weight.shape != (system.m, system.m):
        raise InvalidArgumentError(f"R must be {system.m}x{system.m}, got {weight.shape}")
    if not np.allclose(weight, weight.T):
        raise InvalidArgumentError("R must be symmetric")
    try:
        factor = cho_factor(weight)
    except LinAlgError as exc:
        raise InvalidArgumentError(f"R is not positive definite: {exc}") from exc
    return -cho_solve(factor, system.B.T @ poly_gradient(ec, x))
