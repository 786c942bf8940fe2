"""Small closed-form benchmark systems.

``example1`` is the scalar system ``x' = a x + n x^2 + b u``, ``y = c x`` whose energy
functions have closed forms; ``example2`` is a two-state system with a single
quadratic term ``-x2^2`` in the first equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.energy.system import PolySystem
from src.errors import DomainError
from src.kron import EnergyKind


@dataclass(slots=True, frozen=True)
class ScalarParams:
    """Coefficients ``(a, n, b, c)`` of the scalar example."""

    a: float = -2.0
    n_coef: float = 1.0
    b: float = 2.0
    c: float = 2.0


def build_example1(
    a: float = -2.0, n_coef: float = 1.0, b: float = 2.0, c: float = 2.0
) -> PolySystem:
    return PolySystem(A=[[a]], N=[[n_coef]], B=[[b]], C=[[c]])


def build_example2() -> PolySystem:
    A = np.array([[-1.0, 1.0], [0.0, -1.0]])
    N = np.zeros((2, 4))
    N[0, 3] = -1.0  # -x2^2
    return PolySystem(A=A, N=N, B=np.ones((2, 1)), C=np.ones((1, 2)))


def analytic_energy_example1(
    x: float,
    params: ScalarParams = ScalarParams(),
    eta: float = 0.5,
    kind: EnergyKind | str = EnergyKind.FUTURE,
) -> float:
    """Closed-form energy of the scalar example, ``E(0) = 0``.

    The derivative is the root of the scalar HJB equation that is smooth through the
    origin and matches the stabilizing Riccati root there:

        future:  E'(s) = (f(s) + s sqrt(u^2 + K)) / (eta b^2)
        past:    E'(s) = (s sqrt(u^2 + K) - f(s)) / b^2

    with ``f(s) = a s + n s^2``, ``u = a + n s`` and ``K = eta b^2 c^2``.

    Raises:
        DomainError: if ``u^2 + K`` turns negative between 0 and ``x`` or the formula
            degenerates (``b = 0``, unstable open-loop limit).
    """
    kind = EnergyKind(kind)
    a, n, b, c = params.a, params.n_coef, params.b, params.c
    x = float(x)
    if x == 0.0:
        return 0.0
    if kind is EnergyKind.FUTURE and eta == 0.0:
        return _open_loop_output_energy(x, a, n, c)
    if b == 0.0:
        raise DomainError("Closed-form energy needs b != 0")
    K = eta * b * b * c * c
    _check_radicand(x, a, n, K)
    drift_integral = 0.5 * a * x * x + n * x**3 / 3.0
    root_integral = _root_integral(x, a, n, K)
    if kind is EnergyKind.FUTURE:
        return (drift_integral + root_integral) / (eta * b * b)
    return (root_integral - drift_integral) / (b * b)


def analytic_gradient_example1(
    x: float,
    params: ScalarParams = ScalarParams(),
    eta: float = 0.5,
    kind: EnergyKind | str = EnergyKind.FUTURE,
) -> float:
    """Integrand of :func:`analytic_energy_example1` (for quadrature checks)."""
    kind = EnergyKind(kind)
    a, n, b, c = params.a, params.n_coef, params.b, params.c
    drift = a * x + n * x * x
    root = x * math.sqrt((a + n * x) ** 2 + eta * b * b * c * c)
    if kind is EnergyKind.FUTURE:
        return (drift + root) / (eta * b * b)
    return (root - drift) / (b * b)


def _check_radicand(x: float, a: float, n: float, K: float) -> None:
    lo, hi = min(0.0, x), max(0.0, x)
    candidates = [(a + n * lo) ** 2, (a + n * hi) ** 2]
    if n != 0.0 and lo <= -a / n <= hi:
        candidates.append(0.0)
    if min(candidates) + K < 0.0:
        raise DomainError(f"Square-root argument turns negative on [0, {x}] (K={K:.6g})")


def _root_integral(x: float, a: float, n: float, K: float) -> float:
    """``int_0^x s sqrt((a + n s)^2 + K) ds``."""
    if n == 0.0:
        return 0.5 * x * x * math.sqrt(a * a + K)

    def antiderivative(u: float) -> float:
        radicand = max(u * u + K, 0.0)
        root = math.sqrt(radicand)
        if K > 0.0:
            log_term = K * math.asinh(u / math.sqrt(K))
        elif K < 0.0:
            log_term = K * math.log(abs(u + root))
        else:
            log_term = 0.0
        return (radicand**1.5 / 3.0 - 0.5 * a * (u * root + log_term)) / (n * n)

    return antiderivative(a + n * x) - antiderivative(a)


def _open_loop_output_energy(x: float, a: float, n: float, c: float) -> float:
    """``eta -> 0`` future limit: ``E'(s) = -c^2 s / (2 (a + n s))`` with ``a + n s < 0``."""
    if a >= 0.0 or a + n * x >= 0.0:
        raise DomainError("Open-loop output energy needs a + n s < 0 on [0, x]")
    if n == 0.0:
        return -c * c * x * x / (4.0 * a)
    u = a + n * x
    return -0.5 * c * c * ((u - a) - a * math.log(u / a)) / (n * n)
