"""Tests para el módulo numerics."""

import math

import numpy as np
import pytest

from ravexbose.exceptions import BracketingException, SingularSystemException
from ravexbose.models import NystromSystem
from ravexbose.numerics import (
    brent_root,
    damped_fixed_point,
    expand_bracket,
    gauss_legendre,
    halfline_grid,
    lorentzian_system,
    nystrom_solve,
    richardson_derivative,
)


class TestGaussLegendre:
    """Tests para gauss_legendre."""

    def test_two_point_rule(self):
        """Test de la regla de 2 puntos."""
        grid = gauss_legendre(2, -1.0, 1.0)

        assert grid.nodes == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)], abs=1e-15)
        assert grid.weights == pytest.approx([1.0, 1.0], abs=1e-15)

    @pytest.mark.parametrize("n", [2, 5, 64])
    def test_polynomial_exactness(self, n):
        """Test de exactitud para x²."""
        grid = gauss_legendre(n, -1.0, 1.0)
        assert grid.integrate(grid.nodes**2) == pytest.approx(2.0 / 3.0, abs=1e-14)

    def test_weights_sum_to_length(self):
        """Test que los pesos suman la longitud del intervalo."""
        grid = gauss_legendre(16, 0.5, 3.0)
        assert grid.weights.sum() == pytest.approx(2.5, rel=1e-12)

    def test_lorentzian_integrand(self):
        """Test de ∫ dx/(0.25 + x²) en [−1, 1]."""
        grid = gauss_legendre(64, -1.0, 1.0)
        value = grid.integrate(1.0 / (0.25 + grid.nodes**2))
        assert value == pytest.approx(2.0 * math.atan(2.0) / 0.5, abs=1e-10)

    @pytest.mark.parametrize("args", [(1, 0.0, 1.0), (4, 1.0, 0.0), (4, 0.0, math.inf)])
    def test_invalid_arguments(self, args):
        """Test de validación de argumentos."""
        with pytest.raises(ValueError):
            gauss_legendre(*args)


class TestHalflineGrid:
    """Tests para halfline_grid."""

    def test_infinite_tail(self):
        """Test de ∫₀^∞ dk/(1+k²)² = π/4."""
        grid = halfline_grid(128, 1.0)
        value = grid.integrate(1.0 / (1.0 + grid.nodes**2) ** 2)

        assert value == pytest.approx(math.pi / 4.0, abs=1e-9)
        assert math.isinf(grid.upper)

    def test_slow_tail_is_integrated(self):
        """Test de una cola 1/k² sin truncar: ∫₀^∞ dk/(1+k²) = π/2."""
        grid = halfline_grid(128, 1.0)
        assert grid.integrate(1.0 / (1.0 + grid.nodes**2)) == pytest.approx(
            math.pi / 2.0, abs=1e-9
        )

    def test_finite_cutoff(self):
        """Test con k_max finito: ∫₀^{50} dk/(1+k²)² difiere de π/4 en la cola."""
        grid = halfline_grid(128, 1.0, k_max=50.0)
        value = grid.integrate(1.0 / (1.0 + grid.nodes**2) ** 2)
        tail = 1.0 / (3.0 * 50.0**3)

        assert grid.nodes[-1] < 50.0
        assert value == pytest.approx(math.pi / 4.0 - tail, abs=1e-9)

    def test_single_panel_when_cutoff_is_small(self):
        """Test con k_max por debajo del quiebre: un solo panel."""
        grid = halfline_grid(32, 1.0, k_max=2.0)
        assert grid.integrate(grid.nodes) == pytest.approx(2.0, rel=1e-12)

    def test_invalid_scale(self):
        """Test de validación de la escala."""
        with pytest.raises(ValueError, match="escala"):
            halfline_grid(32, 0.0)


class TestNystromSolve:
    """Tests para nystrom_solve y lorentzian_system."""

    def test_zero_kernel(self):
        """Test que K = 0 devuelve el término independiente."""
        grid = gauss_legendre(8, -1.0, 1.0)
        rhs = np.cos(grid.nodes)
        system = NystromSystem(grid=grid, kernel_matrix=np.zeros((8, 8)), inhomogeneity=rhs)
        phi, report = nystrom_solve(system)

        assert np.array_equal(phi, rhs)
        assert report.converged

    def test_odd_degenerate_kernel(self):
        """Test de K(x,y) = xy con rhs = 1: la solución es 1."""
        grid = gauss_legendre(16, -1.0, 1.0)
        kernel = np.outer(grid.nodes, grid.nodes) * grid.weights[None, :]
        system = NystromSystem(grid=grid, kernel_matrix=kernel, inhomogeneity=np.ones(16))
        phi, _ = nystrom_solve(system)

        assert phi == pytest.approx(np.ones(16), abs=1e-14)

    def test_singular_system(self):
        """Test de detección de (I − K) singular."""
        grid = gauss_legendre(4, -1.0, 1.0)
        system = NystromSystem(grid=grid, kernel_matrix=np.eye(4), inhomogeneity=np.ones(4))
        with pytest.raises(SingularSystemException, match="singular"):
            nystrom_solve(system)

    def test_lieb_kernel_wide(self):
        """Test del núcleo de Lieb con λ=10: simetría, positividad y residuo."""
        grid = gauss_legendre(64, -1.0, 1.0)
        rhs = np.full(64, 1.0 / (2.0 * math.pi))
        g, report = nystrom_solve(lorentzian_system(grid, 10.0, rhs))

        assert np.max(np.abs(g - g[::-1])) < 1e-12
        assert np.all(g > 0)
        assert report.residual < 1e-12

    def test_row_sums_match_analytic_integral(self):
        """Test que cada fila integra el lorentziano exactamente."""
        grid = gauss_legendre(32, -1.0, 1.0)
        lam = 0.05
        system = lorentzian_system(grid, lam, np.zeros(32))
        x = grid.nodes
        exact = (np.arctan((1 - x) / lam) + np.arctan((x + 1) / lam)) / math.pi
        assert system.kernel_matrix.sum(axis=1) == pytest.approx(exact, abs=1e-14)

    def test_invalid_width(self):
        """Test de validación del ancho del núcleo."""
        with pytest.raises(ValueError, match="ancho"):
            lorentzian_system(gauss_legendre(4, -1.0, 1.0), 0.0, np.zeros(4))


class TestBrentRoot:
    """Tests para brent_root y expand_bracket."""

    def test_square_root_of_two(self):
        """Test de x² − 2 en [1, 2]."""
        assert brent_root(lambda x: x**2 - 2.0, 1.0, 2.0) == pytest.approx(
            math.sqrt(2.0), abs=1e-10
        )

    def test_identity(self):
        """Test de f(x) = x en [−1, 1]."""
        assert abs(brent_root(lambda x: x, -1.0, 1.0)) < 1e-12

    def test_no_sign_change(self):
        """Test de intervalo sin cambio de signo."""
        with pytest.raises(BracketingException, match="cambio de signo"):
            brent_root(lambda x: x**2 + 1.0, -1.0, 1.0)

    def test_expand_upwards(self):
        """Test de expansión hacia arriba."""
        lo, hi = expand_bracket(lambda x: x - 10.0, 1.0, 2.0)
        assert lo <= 10.0 <= hi

    def test_expand_downwards(self):
        """Test de expansión hacia abajo respetando el piso."""
        lo, hi = expand_bracket(lambda x: 1.0 / x - 100.0, 1.0, 2.0)
        assert lo <= 0.01 <= hi
        assert lo > 0.0

    def test_expand_failure(self):
        """Test de expansión sin raíz."""
        with pytest.raises(BracketingException, match="expansiones"):
            expand_bracket(lambda x: 1.0 + x, 1.0, 2.0, max_steps=5)

    def test_expand_requires_ordered_positive_bracket(self):
        """Test de validación 0 < lo < hi."""
        with pytest.raises(ValueError):
            expand_bracket(lambda x: x, 2.0, 1.0)


class TestDampedFixedPoint:
    """Tests para damped_fixed_point."""

    def test_identity_map(self):
        """Test que map(x) = x converge en una iteración."""
        x, report = damped_fixed_point(lambda x: x, np.array([3.0, -1.0]))

        assert x == pytest.approx([3.0, -1.0])
        assert report.converged
        assert report.iterations == 1

    def test_cosine(self):
        """Test de x = cos(x) con α = 1."""
        x, report = damped_fixed_point(np.cos, np.array([1.0]), damping=1.0, max_iter=500)

        assert report.converged
        assert float(x[0]) == pytest.approx(0.7390851332151607, abs=1e-9)

    def test_not_converged(self):
        """Test de reporte no convergido."""
        _, report = damped_fixed_point(lambda x: x + 1.0, np.array([0.0]), max_iter=10)

        assert not report.converged
        assert report.iterations == 10

    def test_invalid_damping(self):
        """Test de validación del amortiguamiento."""
        with pytest.raises(ValueError, match="amortiguamiento"):
            damped_fixed_point(np.cos, np.array([1.0]), damping=0.0)


class TestRichardsonDerivative:
    """Tests para richardson_derivative."""

    def test_quadratic(self):
        """Test de d(x²)/dx en x = 3."""
        value, error = richardson_derivative(lambda x: x**2, 3.0, 1e-3)

        assert value == pytest.approx(6.0, abs=1e-10)
        assert error < 1e-8

    def test_constant(self):
        """Test de derivada de una constante."""
        value, _ = richardson_derivative(lambda x: 4.2, 1.0, 1e-3)
        assert value == 0.0

    def test_weak_coupling_energy(self):
        """Test de d/dγ de γ − 4γ^{3/2}/(3π) en γ = 1."""
        value, _ = richardson_derivative(
            lambda g: g - 4.0 * g**1.5 / (3.0 * math.pi), 1.0, 1e-3
        )
        assert value == pytest.approx(1.0 - 2.0 / math.pi, abs=1e-8)

    def test_step_shrinks_near_boundary(self):
        """Test que el paso se reduce para no salir del dominio."""
        value, _ = richardson_derivative(math.sqrt, 1e-3, 1e-3, lower=0.0)
        assert value == pytest.approx(0.5 / math.sqrt(1e-3), rel=5e-3)

    def test_no_room_for_step(self):
        """Test de dominio sin espacio para el paso."""
        with pytest.raises(ValueError, match="dominio"):
            richardson_derivative(math.sqrt, 0.0, 1e-3, lower=0.0)
