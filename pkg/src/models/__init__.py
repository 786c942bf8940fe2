"""Benchmark systems: closed-form examples and finite-element PDE models.

Usage:
    from src.models import get_model, build_example1, analytic_energy_example1

    model = get_model("ks", n=16)
    analytic_energy_example1(0.3, eta=0.5, kind="past")
"""

from src.models.examples import (
    ScalarParams,
    analytic_energy_example1,
    analytic_gradient_example1,
    build_example1,
    build_example2,
)
from src.models.fem import (
    FemKind,
    FemModel,
    FemModelConfig,
    build_burgers,
    build_fem_model,
    build_ks,
)
from src.models.registry import MODEL_MAP, BuiltModel, ModelName, get_model, model_names

__all__ = [
    "MODEL_MAP",
    "BuiltModel",
    "FemKind",
    "FemModel",
    "FemModelConfig",
    "ModelName",
    "ScalarParams",
    "analytic_energy_example1",
    "analytic_gradient_example1",
    "build_burgers",
    "build_example1",
    "build_example2",
    "build_fem_model",
    "build_ks",
    "get_model",
    "model_names",
]
