"""Polynomial energy functions of quadratic control systems.

Usage:
    from src.energy import PolySystem, approx_past_energy, hjb_residual

    system = PolySystem(A, N, B, C)
    ec = approx_past_energy(system, eta=0.9, d=3)
    hjb_residual(system, ec, x)
"""

from src.energy.algorithm import Formulation, approx_future_energy, approx_past_energy
from src.energy.hjb import feedback_control, hjb_residual, hjb_residuals
from src.energy.system import PolySystem, symmetrize_rows

__all__ = [
    "Formulation",
    "PolySystem",
    "approx_future_energy",
    "approx_past_energy",
    "feedback_control",
    "hjb_residual",
    "hjb_residuals",
    "symmetrize_rows",
]
