"""Tests for the benchmark systems and their finite-element assembly."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.linalg import eigh

from src.errors import DomainError, InvalidArgumentError
from src.kron import EnergyKind
from src.models import (
    MODEL_MAP,
    FemKind,
    FemModelConfig,
    ScalarParams,
    analytic_energy_example1,
    analytic_gradient_example1,
    build_burgers,
    build_example1,
    build_ks,
    get_model,
    model_names,
)
from src.solvers import AreProblem, solve_past_are


class TestSmallExamples:
    def test_example1_matrices(self):
        system = build_example1(-2.0, 1.0, 2.0, 2.0)
        assert system.A.tolist() == [[-2.0]]
        assert system.N.tolist() == [[1.0]]
        assert system.B.tolist() == [[2.0]]
        assert system.C.tolist() == [[2.0]]

    def test_example1_linear_variant(self):
        system = build_example1(-1.0, 0.0, 1.0, 1.0)
        assert not np.any(system.N)
        assert (system.n, system.m, system.p) == (1, 1, 1)

    def test_example2_matrices(self, example2):
        assert np.array_equal(example2.A, [[-1.0, 1.0], [0.0, -1.0]])
        e2 = np.array([0.0, 1.0])
        assert np.allclose(example2.N @ np.kron(e2, e2), [-1.0, 0.0])

    def test_example2_quadratic_rows_symmetric(self, example2, rng):
        x, y = rng.normal(size=2), rng.normal(size=2)
        assert np.allclose(example2.N @ np.kron(x, y), example2.N @ np.kron(y, x))


class TestClosedForm:
    @pytest.mark.parametrize("kind", list(EnergyKind))
    def test_zero_at_origin(self, kind):
        assert analytic_energy_example1(0.0, kind=kind) == 0.0

    @pytest.mark.parametrize("kind", list(EnergyKind))
    @pytest.mark.parametrize("x", [-0.4, 0.05, 0.3])
    def test_matches_quadrature_of_gradient(self, kind, x):
        params = ScalarParams()
        integral, _ = quad(
            lambda s: analytic_gradient_example1(s, params, 0.5, kind), 0.0, x, epsabs=1e-14
        )
        assert analytic_energy_example1(x, params, 0.5, kind) == pytest.approx(
            integral, rel=1e-9, abs=1e-14
        )

    def test_future_curvature_at_origin(self):
        step = 1e-3
        value = analytic_energy_example1(step, eta=0.5)
        second = (value + analytic_energy_example1(-step, eta=0.5)) / step**2
        assert second == pytest.approx(math.sqrt(3.0) - 1.0, rel=1e-4)

    def test_open_loop_limit(self):
        params = ScalarParams()
        integrand = lambda s: -params.c**2 * s / (2 * (params.a + params.n_coef * s))
        integral, _ = quad(integrand, 0, 0.5)
        assert analytic_energy_example1(0.5, params, 0.0) == pytest.approx(integral, rel=1e-10)

    def test_negative_radicand_is_a_domain_error(self):
        with pytest.raises(DomainError):
            analytic_energy_example1(0.1, eta=-1.0, kind="future")


class TestBurgers:
    def test_mass_matrix_for_two_nodes(self):
        model = build_burgers(FemModelConfig(n=2))
        h = 1.0 / 3.0
        assert np.allclose(model.mass, [[4 * h / 6, h / 6], [h / 6, 4 * h / 6]])

    def test_input_column_sums(self):
        model = build_burgers(FemModelConfig(n=8, m=4))
        h = 1.0 / 9.0
        sums = model.inputs.sum(axis=0)
        assert np.allclose(sums[1:3], 0.25)
        # The ramps of the boundary hats miss a triangle of area h/2.
        assert np.allclose(sums[[0, 3]], 0.25 - h / 2)

    def test_outputs_average_each_quarter(self):
        model = build_burgers(FemModelConfig(n=7))
        averages = model.outputs @ np.ones(7)
        assert np.allclose(averages[1:3], 1.0, rtol=1e-12)
        # Quarter length 1/4 loses the h/2 boundary ramp with h = 1/8.
        assert np.allclose(averages[[0, 3]], 0.75, rtol=1e-12)

    def test_dimensions_and_defaults(self):
        model = build_burgers(FemModelConfig(n=8))
        assert model.config.m == 4 and model.config.p == 4
        assert model.config.epsilon == 0.001
        assert model.system.B.shape == (8, 4)
        assert model.system.C.shape == (4, 8)
        assert model.x0.shape == (8,)

    def test_initial_state_is_supported_on_left_half(self):
        model = build_burgers(FemModelConfig(n=16))
        assert np.all(np.abs(model.z0[-5:]) < 0.1 * np.max(np.abs(model.z0)))
        assert np.allclose(model.sqrt_mass @ model.sqrt_mass, model.mass)

    def test_stiffness_is_negative_definite(self):
        model = build_burgers(FemModelConfig(n=8))
        assert np.all(np.linalg.eigvalsh(model.system.A) < 0)

    def test_transform_preserves_moments(self):
        model = build_burgers(FemModelConfig(n=8))
        _assert_moments_preserved(model)

    def test_rejects_wrong_kind(self):
        with pytest.raises(InvalidArgumentError):
            build_burgers(FemModelConfig(n=8, kind=FemKind.KS))

    def test_rejects_single_node(self):
        with pytest.raises(InvalidArgumentError):
            FemModelConfig(n=1)


class TestKuramotoSivashinsky:
    def test_dimension_bookkeeping(self):
        model = build_ks(FemModelConfig(n=16, kind=FemKind.KS))
        assert model.mass.shape == (16, 16)
        assert model.system.B.shape == (16, 5)
        assert model.system.C.shape == (2, 16)
        assert model.config.epsilon == pytest.approx(1.0 / 13.0291**2)

    def test_constant_is_in_the_kernel(self):
        model = build_ks(FemModelConfig(n=16, kind=FemKind.KS))
        constant = np.tile([1.0, 0.0], 8)
        assert np.linalg.norm(model.stiffness @ constant) <= 1e-10

    def test_outputs_average_each_half(self):
        model = build_ks(FemModelConfig(n=16, kind=FemKind.KS))
        constant = np.tile([1.0, 0.0], 8)
        assert np.allclose(model.outputs @ constant, 1.0, rtol=1e-12)

    def test_past_energy_is_computable_despite_unobserved_modes(self):
        model = build_ks(FemModelConfig(n=16, kind=FemKind.KS))
        system = model.system
        solution = solve_past_are(AreProblem(system.A, system.B, system.C, 0.1))
        assert np.all(np.isfinite(solution.X))
        assert np.linalg.eigvalsh(solution.X).min() >= -1e-8 * np.linalg.norm(solution.X, 2)
        assert np.all(solution.closed_loop_eigenvalues.real < 0)

    def test_convection_integrates_to_zero(self, rng):
        model = build_ks(FemModelConfig(n=16, kind=FemKind.KS))
        constant = np.tile([1.0, 0.0], 8)
        for _ in range(3):
            z = rng.normal(size=16)
            assert abs(constant @ model.quadratic @ np.kron(z, z)) <= 1e-10

    def test_low_wavenumber_spectrum(self):
        model = build_ks(FemModelConfig(n=64, kind=FemKind.KS))
        eps = model.config.epsilon
        spectrum = np.sort(eigh(model.stiffness, model.mass, eigvals_only=True))[::-1]

        def symbol(j: int) -> float:
            k = 2 * math.pi * j
            return eps * k**2 - eps**2 * k**4

        expected = [symbol(1)] * 2 + [symbol(2)] * 2 + [0.0] + [symbol(3)] * 2
        assert spectrum[4] == pytest.approx(0.0, abs=1e-8)
        for index in (0, 1, 2, 3, 5, 6):
            assert spectrum[index] == pytest.approx(expected[index], rel=1e-2)

    def test_transform_preserves_moments(self):
        model = build_ks(FemModelConfig(n=16, kind=FemKind.KS))
        _assert_moments_preserved(model)

    @pytest.mark.parametrize("n", [15, 2])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(InvalidArgumentError):
            FemModelConfig(n=n, kind=FemKind.KS)

    def test_rejects_nonpositive_epsilon(self):
        with pytest.raises(InvalidArgumentError):
            FemModelConfig(n=16, kind=FemKind.KS, epsilon=0.0)


def _assert_moments_preserved(model) -> None:
    system = model.system
    generalized = np.linalg.solve(model.mass, model.stiffness)
    applied = np.linalg.solve(model.mass, model.inputs)
    state = system.B
    for _ in range(4):
        expected = model.outputs @ applied
        scale = max(np.linalg.norm(expected), 1e-300)
        assert np.linalg.norm(system.C @ state - expected) <= 1e-9 * scale
        applied = generalized @ applied
        state = system.A @ state


class TestRegistry:
    def test_names(self):
        assert set(model_names()) == set(MODEL_MAP)

    def test_canonical_states(self):
        assert get_model("example1").x0.tolist() == [0.5]
        assert get_model("example2").x0.tolist() == [0.5, -0.5]

    def test_fem_model_needs_size(self):
        with pytest.raises(InvalidArgumentError):
            get_model("burgers")

    def test_fem_model(self):
        model = get_model("ks", n=16, m=None)
        assert model.system.n == 16
        assert model.system.m == 5

    def test_rejects_unknown_parameters(self):
        with pytest.raises(InvalidArgumentError):
            get_model("example2", n=4)

    def test_rejects_unknown_model(self):
        with pytest.raises(InvalidArgumentError):
            get_model("heat")
