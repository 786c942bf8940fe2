"""Finite-element semi-discretizations of viscous Burgers and Kuramoto-Sivashinsky.

Both models live on the unit interval with characteristic-function inputs
``b_j = chi[(j-1)/m, j/m]`` and outputs that average the state over each
subdomain, ``y_i = p int_{(i-1)/p}^{i/p} z dx``.

Burgers:  z_t = eps z_xx - 1/2 (z^2)_x + sum_j b_j u_j
          homogeneous Dirichlet ends, n interior nodes of a linear-element mesh.
KS:       z_t = -eps z_xx - eps^2 z_xxxx - eps (z^2)_x + sum_j b_j u_j
          periodic, Hermite cubic elements with value and slope per node.

The Galerkin system ``E z' = A z + N (z ⊗ z) + B u`` is brought to standard form by
``x = S z`` with ``S`` the symmetric square root of the mass matrix ``E``.

Usage:
    from src.models.fem import FemKind, FemModelConfig, build_burgers

    model = build_burgers(FemModelConfig(n=8, kind=FemKind.BURGERS))
    model.system, model.x0
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)
from typing import Final

import numpy as np
from scipy.linalg import eigh

from src.energy.system import PolySystem, symmetrize_rows
from src.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

KS_EPSILON: Final = 1.0 / 13.0291**2
BURGERS_AMPLITUDE: Final = 0.0005
KS_AMPLITUDE: Final = 0.01
LOAD_QUADRATURE_ORDER: Final = 5


class FemKind(StrEnum):
    BURGERS = "burgers"
    KS = "ks"


_DEFAULTS: Final = {
    FemKind.BURGERS: {"m": 4, "p": 4, "epsilon": 0.001},
    FemKind.KS: {"m": 5, "p": 2, "epsilon": KS_EPSILON},
}


@dataclass(slots=True, frozen=True)
class FemModelConfig:
    """Discretization size and PDE parameters; ``None`` picks the model default."""

    n: int
    kind: FemKind = FemKind.BURGERS
    m: int | None = None
    p: int | None = None
    epsilon: float | None = None

    def __post_init__(self) -> None:
        kind = FemKind(self.kind)
        object.__setattr__(self, "kind", kind)
        for name, value in _DEFAULTS[kind].items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, value)
        if self.m < 1 or self.p < 1:
            raise InvalidArgumentError(f"m and p must be positive, got m={self.m}, p={self.p}")
        if not self.epsilon > 0.0:
            raise InvalidArgumentError(f"epsilon must be positive, got {self.epsilon}")
        if kind is FemKind.BURGERS and self.n < 2:
            raise InvalidArgumentError(f"Burgers needs at least 2 interior nodes, got n={self.n}")
        if kind is FemKind.KS and (self.n < 4 or self.n % 2):
            raise InvalidArgumentError(f"KS needs an even n >= 4, got n={self.n}")


@dataclass(slots=True, frozen=True)
class FemModel:
    """Standard-form system plus the Galerkin matrices it was built from."""

    config: FemModelConfig
    system: PolySystem
    x0: np.ndarray
    mass: np.ndarray
    stiffness: np.ndarray
    quadratic: np.ndarray
    inputs: np.ndarray
    outputs: np.ndarray
    z0: np.ndarray
    sqrt_mass: np.ndarray


# Reference basis on xi in [0, 1]: returns (values, d/dx, d2/dx2), each (n_local, n_points).
Basis = Callable[[np.ndarray, float], tuple[np.ndarray, np.ndarray, np.ndarray]]


@dataclass(slots=True, frozen=True)
class _Mesh:
    left: np.ndarray  # left coordinate of each element
    h: float
    dofs: np.ndarray  # (n_elements, n_local) global dof, -1 where constrained
    n_dofs: int
    basis: Basis


def _linear_basis(xi: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    values = np.vstack([1.0 - xi, xi])
    slopes = np.vstack([np.full_like(xi, -1.0 / h), np.full_like(xi, 1.0 / h)])
    return values, slopes, np.zeros_like(values)


def _hermite_basis(xi: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    values = np.vstack(
        [
            1.0 - 3.0 * xi**2 + 2.0 * xi**3,
            h * (xi - 2.0 * xi**2 + xi**3),
            3.0 * xi**2 - 2.0 * xi**3,
            h * (-(xi**2) + xi**3),
        ]
    )
    slopes = np.vstack(
        [
            (-6.0 * xi + 6.0 * xi**2) / h,
            1.0 - 4.0 * xi + 3.0 * xi**2,
            (6.0 * xi - 6.0 * xi**2) / h,
            -2.0 * xi + 3.0 * xi**2,
        ]
    )
    curvatures = np.vstack(
        [
            (-6.0 + 12.0 * xi) / h**2,
            (-4.0 + 6.0 * xi) / h,
            (6.0 - 12.0 * xi) / h**2,
            (-2.0 + 6.0 * xi) / h,
        ]
    )
    return values, slopes, curvatures


def _burgers_mesh(n: int) -> _Mesh:
    h = 1.0 / (n + 1)
    # Element e joins nodes e and e+1; nodes 0 and n+1 carry the Dirichlet condition.
    nodes = np.arange(n + 1)
    dofs = np.column_stack([nodes - 1, nodes])
    dofs[dofs >= n] = -1
    return _Mesh(left=nodes * h, h=h, dofs=dofs, n_dofs=n, basis=_linear_basis)


def _ks_mesh(n: int) -> _Mesh:
    nodes = n // 2
    h = 1.0 / nodes
    first = np.arange(nodes)
    second = (first + 1) % nodes
    dofs = np.column_stack([2 * first, 2 * first + 1, 2 * second, 2 * second + 1])
    return _Mesh(left=first * h, h=h, dofs=dofs, n_dofs=n, basis=_hermite_basis)


def _gauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre points and weights mapped to [0, 1]."""
    points, weights = np.polynomial.legendre.leggauss(order)
    return 0.5 * (points + 1.0), 0.5 * weights


def _element_integrals(
    mesh: _Mesh, order: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Reference-element mass, slope, curvature and ``phi_i phi_j phi_k'`` integrals."""
    xi, weights = _gauss(order)
    values, slopes, curvatures = mesh.basis(xi, mesh.h)
    w = weights * mesh.h
    mass = np.einsum("aq,bq,q->ab", values, values, w)
    slope = np.einsum("aq,bq,q->ab", slopes, slopes, w)
    curvature = np.einsum("aq,bq,q->ab", curvatures, curvatures, w)
    # triple[i, j, k] = int phi_i' phi_j phi_k
    triple = np.einsum("iq,jq,kq,q->ijk", slopes, values, values, w)
    return mass, slope, curvature, triple


def _scatter_matrix(mesh: _Mesh, local: np.ndarray) -> np.ndarray:
    out = np.zeros((mesh.n_dofs, mesh.n_dofs))
    for element_dofs in mesh.dofs:
        keep = element_dofs >= 0
        index = element_dofs[keep]
        out[np.ix_(index, index)] += local[np.ix_(keep, keep)]
    return out


def _scatter_tensor(mesh: _Mesh, local: np.ndarray) -> np.ndarray:
    out = np.zeros((mesh.n_dofs,) * 3)
    for element_dofs in mesh.dofs:
        keep = element_dofs >= 0
        index = element_dofs[keep]
        out[np.ix_(index, index, index)] += local[np.ix_(keep, keep, keep)]
    return out


def _load_vector(
    mesh: _Mesh,
    func: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    order: int,
) -> np.ndarray:
    """``int_lo^hi phi_i(x) func(x) dx``, splitting elements at ``lo`` and ``hi``."""
    xi_ref, weights = _gauss(order)
    out = np.zeros(mesh.n_dofs)
    for left, element_dofs in zip(mesh.left, mesh.dofs):
        a, b = max(lo, left), min(hi, left + mesh.h)
        if b <= a:
            continue
        x = a + (b - a) * xi_ref
        values, _, _ = mesh.basis((x - left) / mesh.h, mesh.h)
        local = values @ (weights * (b - a) * func(x))
        keep = element_dofs >= 0
        np.add.at(out, element_dofs[keep], local[keep])
    return out


def _indicator_loads(mesh: _Mesh, count: int, order: int) -> np.ndarray:
    """Columns ``int phi_i chi[j/count, (j+1)/count]`` for j = 0..count-1."""
    return np.column_stack(
        [
            _load_vector(mesh, np.ones_like, j / count, (j + 1) / count, order)
            for j in range(count)
        ]
    )


def _standard_form(
    config: FemModelConfig,
    mass: np.ndarray,
    stiffness: np.ndarray,
    quadratic: np.ndarray,
    inputs: np.ndarray,
    outputs: np.ndarray,
    load: np.ndarray,
) -> FemModel:
    n = mass.shape[0]
    spectrum, vectors = eigh(mass)
    if spectrum[0] <= 0.0:
        raise InvalidArgumentError("Mass matrix is not positive definite")
    sqrt_mass = (vectors * np.sqrt(spectrum)) @ vectors.T
    inv_sqrt = (vectors / np.sqrt(spectrum)) @ vectors.T
    sqrt_mass = 0.5 * (sqrt_mass + sqrt_mass.T)
    inv_sqrt = 0.5 * (inv_sqrt + inv_sqrt.T)

    tensor = quadratic.reshape(n, n, n)
    transformed = np.einsum(
        "ai,ijk,jb,kc->abc", inv_sqrt, tensor, inv_sqrt, inv_sqrt, optimize=True
    )
    z0 = np.linalg.solve(mass, load)
    system = PolySystem(
        A=inv_sqrt @ stiffness @ inv_sqrt,
        N=symmetrize_rows(transformed.reshape(n, n * n), n),
        B=inv_sqrt @ inputs,
        C=outputs @ inv_sqrt,
    )
    logger.info("Assembled %s model with n=%d, m=%d, p=%d", config.kind, n, config.m, config.p)
    return FemModel(
        config=config,
        system=system,
        x0=sqrt_mass @ z0,
        mass=mass,
        stiffness=stiffness,
        quadratic=quadratic,
        inputs=inputs,
        outputs=outputs,
        z0=z0,
        sqrt_mass=sqrt_mass,
    )


def build_burgers(config: FemModelConfig) -> FemModel:
    """Linear-element Burgers model with initial state ``0.0005 sin^2(2 pi x)`` on (0, 0.5)."""
    if config.kind is not FemKind.BURGERS:
        raise InvalidArgumentError(f"build_burgers needs a Burgers config, got {config.kind}")
    mesh = _burgers_mesh(config.n)
    mass_local, slope_local, _, triple_local = _element_integrals(mesh, order=2)
    mass = _scatter_matrix(mesh, mass_local)
    stiffness = -config.epsilon * _scatter_matrix(mesh, slope_local)
    # -1/2 (z^2)_x tested with phi_i equals 1/2 int z^2 phi_i' for Dirichlet data.
    quadratic = 0.5 * _scatter_tensor(mesh, triple_local).reshape(config.n, -1)
    inputs = _indicator_loads(mesh, config.m, order=2)
    outputs = config.p * _indicator_loads(mesh, config.p, order=2).T

    def initial(x: np.ndarray) -> np.ndarray:
        return BURGERS_AMPLITUDE * np.sin(2.0 * math.pi * x) ** 2

    load = _load_vector(mesh, initial, 0.0, 0.5, LOAD_QUADRATURE_ORDER)
    return _standard_form(config, mass, stiffness, quadratic, inputs, outputs, load)


def build_ks(config: FemModelConfig) -> FemModel:
    """Periodic Hermite-element KS model with initial state ``0.01/sqrt(eps) sin(4 pi x)``."""
    if config.kind is not FemKind.KS:
        raise InvalidArgumentError(f"build_ks needs a KS config, got {config.kind}")
    eps = config.epsilon
    mesh = _ks_mesh(config.n)
    mass_local, slope_local, curvature_local, triple_local = _element_integrals(mesh, order=5)
    mass = _scatter_matrix(mesh, mass_local)
    stiffness = eps * _scatter_matrix(mesh, slope_local) - eps**2 * _scatter_matrix(
        mesh, curvature_local
    )
    # -eps (z^2)_x tested with phi_i equals eps int z^2 phi_i' on a periodic domain.
    quadratic = eps * _scatter_tensor(mesh, triple_local).reshape(config.n, -1)
    inputs = _indicator_loads(mesh, config.m, order=2)
    outputs = config.p * _indicator_loads(mesh, config.p, order=2).T
    amplitude = KS_AMPLITUDE / math.sqrt(eps)

    def initial(x: np.ndarray) -> np.ndarray:
        return amplitude * np.sin(4.0 * math.pi * x)

    load = _load_vector(mesh, initial, 0.0, 1.0, LOAD_QUADRATURE_ORDER)
    return _standard_form(config, mass, stiffness, quadratic, inputs, outputs, load)


def build_fem_model(config: FemModelConfig) -> FemModel:
    if config.kind is FemKind.BURGERS:
        return build_burgers(config)
    return build_ks(config)
