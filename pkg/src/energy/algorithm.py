"""Degree-by-degree Taylor coefficients of the past and future H∞ energy functions.

The quadratic coefficient comes from a Riccati equation. Every higher degree k
solves one Kronecker-sum system whose right-hand side uses only degrees below k:

    future:  c_k solves  L_k(A^T) - k eta (I ⊗ W2 B B^T)  against
             -L_{k-1}(N^T) c_{k-1} + eta/4 * sum_{i+j=k+2, i,j>=3} i j vec(W_i^T B B^T W_j)
    past:    c_k solves  L_k(A^T) + k (I ⊗ V2 B B^T)  against
             -L_{k-1}(N^T) c_{k-1} - 1/4 * sum_{i+j=k+2, i,j>=3} i j vec(V_i^T B B^T V_j)

where ``W_i`` is ``c_i`` reshaped row-major to ``n x n**(i-1)``. The i = 2 and j = 2
terms of the sum are the ones folded into the left-hand side.

Two formulations are available:

``closed_loop`` (default)
    Solves ``L_k(A_l^T) c_k = sym(rhs)`` with ``A_l = A - eta B B^T W2`` (future) or
    ``A_l = A + B B^T V2`` (past). On symmetric vectors ``L_k(A_l^T)`` equals the
    symmetric part of the one-slot operator above, so this yields the symmetric
    coefficient that balances the degree-k terms of the HJB equation exactly.
``shifted``
    Solves the one-slot shifted system as written and symmetrizes the solution.

Usage:
    from src.energy import approx_future_energy
    from src.models import build_example2

    ec = approx_future_energy(build_example2(), eta=0.1, d=4)
"""

from __future__ import annotations

import logging
import time
from typing import Final, Literal, get_args

import numpy as np

from src.energy.system import PolySystem
from src.errors import InvalidArgumentError, NumericalError
from src.kron import CoeffVector, EnergyCoefficients, EnergyKind, kron_sum_apply, symmetrize
from src.solvers.riccati import AreProblem, solve_future_are, solve_past_are
from src.solvers.tensor import (
    CONDITION_LIMIT,
    IMAG_TOL,
    ShiftedKronSystem,
    schur_decompose,
    solve_shifted_kron_system,
)

logger = logging.getLogger(__name__)

Formulation = Literal["closed_loop", "shifted"]

RESIDUAL_TOL: Final = 1e-9


def approx_future_energy(
    system: PolySystem,
    eta: float,
    d: int,
    *,
    formulation: Formulation = "closed_loop",
    quadratic: np.ndarray | None = None,
    check_gamma: bool = True,
    residual_tol: float = RESIDUAL_TOL,
    condition_limit: float = CONDITION_LIMIT,
    imag_tol: float = IMAG_TOL,
) -> EnergyCoefficients:
    """Future energy coefficients w_2..w_d.

    Args:
        system: Quadratic system.
        eta: Gain parameter ``1 - gamma**-2``, at most 1.
        d: Highest degree, at least 2.
        formulation: ``"closed_loop"`` or ``"shifted"``, see the module docstring.
        quadratic: Precomputed W2; the Riccati solve is skipped when given.
        check_gamma: Forwarded to :func:`solve_future_are`; ignored when ``quadratic``
            is given.
        residual_tol: Largest accepted normwise backward error per degree.
        condition_limit: Singularity threshold of the tensor solver.
        imag_tol: Imaginary-residue warning threshold of the tensor solver.
    """
    if quadratic is None:
        problem = AreProblem(system.A, system.B, system.C, eta)
        quadratic = solve_future_are(problem, check_gamma=check_gamma).X
    return _approximate(
        system,
        EnergyKind.FUTURE,
        eta,
        d,
        quadratic,
        formulation=formulation,
        residual_tol=residual_tol,
        condition_limit=condition_limit,
        imag_tol=imag_tol,
    )


def approx_past_energy(
    system: PolySystem,
    eta: float,
    d: int,
    *,
    formulation: Formulation = "closed_loop",
    quadratic: np.ndarray | None = None,
    residual_tol: float = RESIDUAL_TOL,
    condition_limit: float = CONDITION_LIMIT,
    imag_tol: float = IMAG_TOL,
) -> EnergyCoefficients:
    """Past energy coefficients v_2..v_d; ``eta`` only enters through V2."""
    if quadratic is None:
        quadratic = solve_past_are(AreProblem(system.A, system.B, system.C, eta)).X
    return _approximate(
        system,
        EnergyKind.PAST,
        eta,
        d,
        quadratic,
        formulation=formulation,
        residual_tol=residual_tol,
        condition_limit=condition_limit,
        imag_tol=imag_tol,
    )


def _approximate(
    system: PolySystem,
    kind: EnergyKind,
    eta: float,
    d: int,
    quadratic: np.ndarray,
    *,
    formulation: Formulation,
    residual_tol: float,
    condition_limit: float,
    imag_tol: float,
) -> EnergyCoefficients:
    if not isinstance(d, int | np.integer) or d < 2:
        raise InvalidArgumentError(f"Degree must be an integer >= 2, got {d!r}")
    if formulation not in get_args(Formulation):
        raise InvalidArgumentError(f"Unknown formulation '{formulation}'")
    n = system.n
    X2 = np.asarray(quadratic, dtype=np.float64)
    if X2.shape != (n, n):
        raise InvalidArgumentError(f"Quadratic coefficient must be {n}x{n}, got {X2.shape}")
    X2 = 0.5 * (X2 + X2.T)
    coeffs = {2: CoeffVector(n, 2, X2.reshape(-1))}
    if d == 2:
        return EnergyCoefficients(n=n, eta=eta, kind=kind, coeffs=coeffs)

    input_gram = system.B @ system.B.T
    if kind is EnergyKind.FUTURE:
        base_shift = -eta * X2 @ input_gram
        quad_weight = 0.25 * eta
    else:
        base_shift = X2 @ input_gram
        quad_weight = -0.25

    closed_loop = formulation == "closed_loop"
    operator = system.A + base_shift.T if closed_loop else system.A
    factor = schur_decompose(operator)
    no_shift = np.zeros((n, n))
    # B^T W_j for every solved degree j >= 3.
    input_products: dict[int, np.ndarray] = {}

    for k in range(3, d + 1):
        started = time.perf_counter()
        rhs = -kron_sum_apply(system.N.T, coeffs[k - 1].data, k - 1)
        for i in range(3, k):
            j = k + 2 - i
            rhs += quad_weight * i * j * (input_products[i].T @ input_products[j]).reshape(-1)

        if closed_loop:
            rhs = symmetrize(CoeffVector(n, k, rhs)).data
            kron_system = ShiftedKronSystem(A=operator, M=no_shift, k=k, b=rhs)
        else:
            kron_system = ShiftedKronSystem(A=operator, M=k * base_shift, k=k, b=rhs)
        solution = solve_shifted_kron_system(
            kron_system,
            schur_factor=factor,
            condition_limit=condition_limit,
            imag_tol=imag_tol,
        )
        error = _backward_error(kron_system, solution)
        if error > residual_tol:
            raise NumericalError(
                f"Degree {k} {kind} solve has backward error {error:.2e} > {residual_tol:.1e}"
            )
        coeffs[k] = symmetrize(CoeffVector(n, k, solution))
        input_products[k] = system.B.T @ coeffs[k].matrix()
        logger.info(
            "%s degree %d (n=%d): %.3fs, backward error %.2e",
            kind,
            k,
            n,
            time.perf_counter() - started,
            error,
        )
    return EnergyCoefficients(n=n, eta=eta, kind=kind, coeffs=coeffs)


def _backward_error(kron_system: ShiftedKronSystem, solution: np.ndarray) -> float:
    """Normwise backward error ``|Lv - b| / (|L| |v| + |b|)`` with a Frobenius-type |L|."""
    residual = np.linalg.norm(kron_system.apply(solution) - kron_system.b)
    operator_norm = kron_system.k * np.linalg.norm(kron_system.A) + np.linalg.norm(kron_system.M)
    scale = operator_norm * np.linalg.norm(solution) + np.linalg.norm(kron_system.b)
    return float(residual / max(scale, np.finfo(float).tiny))
