"""Shared fixtures: seeded generators, stable test matrices and the small examples."""

from __future__ import annotations

import numpy as np
import pytest

from src.energy import PolySystem
from src.models import build_example1, build_example2


def stable_matrix(rng: np.random.Generator, n: int, margin: float = 1.0) -> np.ndarray:
    """Random matrix whose symmetric part is negative definite (spectral abscissa <= -margin)."""
    G = rng.normal(size=(n, n))
    return G - (np.linalg.norm(G, 2) + margin) * np.eye(n)


def random_system(rng: np.random.Generator, n: int, m: int = 1, p: int = 1) -> PolySystem:
    return PolySystem(
        A=stable_matrix(rng, n),
        N=0.5 * rng.normal(size=(n, n * n)),
        B=rng.normal(size=(n, m)),
        C=rng.normal(size=(p, n)),
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def example1() -> PolySystem:
    return build_example1()


@pytest.fixture
def example2() -> PolySystem:
    return build_example2()
