"""Linear-algebra solvers: Riccati seeds and Kronecker-sum tensor systems.

Usage:
    from src.solvers import AreProblem, solve_future_are, solve_shifted_kron_system

    W2 = solve_future_are(AreProblem(A, B, C, eta=0.9)).X
"""

from src.solvers.riccati import (
    AreProblem,
    AreSolution,
    eta_from_gamma,
    gamma_from_eta,
    gamma_lower_bound,
    solve_future_are,
    solve_past_are,
)
from src.solvers.tensor import (
    SchurFactorization,
    ShiftedKronSystem,
    kron_power_multiply,
    schur_decompose,
    solve_shifted_kron_system,
)

__all__ = [
    "AreProblem",
    "AreSolution",
    "SchurFactorization",
    "ShiftedKronSystem",
    "eta_from_gamma",
    "gamma_from_eta",
    "gamma_lower_bound",
    "kron_power_multiply",
    "schur_decompose",
    "solve_future_are",
    "solve_past_are",
    "solve_shifted_kron_system",
]
