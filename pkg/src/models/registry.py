"""Name-based model factory used by the CLI and the table sweeps.

Usage:
    from src.models import get_model

    model = get_model("burgers", n=16)
    model.system, model.x0

    model = get_model("example1", a=-1.0, n_coef=0.0)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal, get_args

import numpy as np

from src.energy.system import PolySystem
from src.errors import InvalidArgumentError
from src.models.examples import build_example1, build_example2
from src.models.fem import FemKind, FemModelConfig, build_fem_model

ModelName = Literal["example1", "example2", "burgers", "ks"]

# Model aliases -> builder family
MODEL_MAP: dict[str, str] = {
    "example1": "scalar",
    "example2": "planar",
    "burgers": FemKind.BURGERS,
    "ks": FemKind.KS,
}

_SCALAR_KEYS = frozenset({"a", "n_coef", "b", "c"})
_FEM_KEYS = frozenset({"n", "m", "p", "epsilon"})


@dataclass(slots=True, frozen=True)
class BuiltModel:
    """A system in standard form together with the state its energies are reported at."""

    name: str
    system: PolySystem
    x0: np.ndarray


def model_names() -> tuple[str, ...]:
    return get_args(ModelName)


def get_model(name: str, **params: Any) -> BuiltModel:
    """Build a registered model.

    Args:
        name: One of ``example1``, ``example2``, ``burgers``, ``ks``.
        **params: Model parameters; ``None`` values fall back to the model default.
            example1 takes ``a, n_coef, b, c``; the FEM models take ``n, m, p, epsilon``.

    Returns:
        The built model with its canonical initial state.
    """
    family = MODEL_MAP.get(name)
    if family is None:
        raise InvalidArgumentError(f"Unknown model '{name}'. Choose from {model_names()}")
    given = {key: value for key, value in params.items() if value is not None}

    if family == "scalar":
        _reject_unknown(name, given, _SCALAR_KEYS)
        return BuiltModel(name, build_example1(**given), np.array([0.5]))
    if family == "planar":
        _reject_unknown(name, given, frozenset())
        return BuiltModel(name, build_example2(), np.array([0.5, -0.5]))

    _reject_unknown(name, given, _FEM_KEYS)
    if "n" not in given:
        raise InvalidArgumentError(f"Model '{name}' needs a state dimension n")
    fem = build_fem_model(FemModelConfig(kind=FemKind(family), **given))
    return BuiltModel(name, fem.system, fem.x0)


def _reject_unknown(name: str, given: dict[str, Any], allowed: frozenset[str]) -> None:
    unknown = set(given) - allowed
    if unknown:
        raise InvalidArgumentError(
            f"Model '{name}' does not take parameter(s): {', '.join(sorted(unknown))}"
        )
