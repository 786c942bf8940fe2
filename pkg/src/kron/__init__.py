"""Kronecker-product algebra for polynomial energy functions.

Usage:
    from src.kron import CoeffVector, kron_power, symmetrize

    c = symmetrize(CoeffVector(n=2, k=2, data=[1.0, 2.0, 0.0, 3.0]))
    c.data  # [1.0, 1.0, 1.0, 3.0]
"""

from src.kron.coefficients import CoeffVector, EnergyCoefficients, EnergyKind
from src.kron.ops import (
    is_symmetric,
    kron_power,
    kron_sum_apply,
    poly_eval,
    poly_gradient,
    symmetrize,
)

__all__ = [
    "CoeffVector",
    "EnergyCoefficients",
    "EnergyKind",
    "is_symmetric",
    "kron_power",
    "kron_sum_apply",
    "poly_eval",
    "poly_gradient",
    "symmetrize",
]
