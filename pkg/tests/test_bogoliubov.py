"""Tests para los resultados perturbativos de Bogoliubov."""

import math

import numpy as np
import pytest

from ravexbose.bogoliubov import (
    _truncated_integral,
    bogoliubov_dispersion,
    perturbative,
    perturbative_curve,
    perturbative_energy,
    truncated_functional_check,
    truncated_integrand,
    truncated_mode_energy,
)
from ravexbose.exact_ground import compressibility_mu, compressibility_sound
from ravexbose.models import Method


class TestPerturbative:
    """Tests para perturbative."""

    def test_unit_coupling(self):
        """Test de la aritmética cerrada en γ = 1."""
        result = perturbative(1.0)

        assert result.e == pytest.approx(1.0 - 4.0 / (3.0 * math.pi), abs=1e-12)
        assert result.e == pytest.approx(0.5755868, abs=1e-7)
        assert result.mu == pytest.approx(1.3633802, abs=1e-7)
        assert result.vs_compressibility == pytest.approx(1.8339477, abs=1e-7)
        assert result.vs_spectrum == 2.0

    def test_free_gas(self):
        """Test de γ = 0: todo se anula."""
        result = perturbative(0.0)
        assert (result.e, result.mu, result.vs_compressibility, result.vs_spectrum) == (
            0.0,
            0.0,
            0.0,
            0.0,
        )

    def test_sign_change(self):
        """Test de e = 0 en γ = (3π/4)²."""
        assert perturbative_energy((3.0 * math.pi / 4.0) ** 2) == pytest.approx(0.0, abs=1e-12)
        assert perturbative(6.0).e < 0

    def test_negative_gamma(self):
        """Test de γ < 0."""
        with pytest.raises(ValueError, match="no negativo"):
            perturbative(-0.1)

    def test_undefined_compressibility_velocity(self):
        """Test de v_s por compresibilidad indefinida para √γ > 2π."""
        result = perturbative(50.0)
        assert math.isnan(result.vs_compressibility)
        assert result.vs_spectrum == pytest.approx(2.0 * math.sqrt(50.0))

    @pytest.mark.parametrize("gamma", [0.1, 1.0, 5.0, 30.0])
    def test_bounds(self, gamma):
        """Test de e < γ y vs_spectrum ≥ vs_compressibility."""
        result = perturbative(gamma)
        assert result.e < gamma
        assert result.vs_spectrum >= result.vs_compressibility

    def test_velocities_merge_at_weak_coupling(self):
        """Test de vs_spectrum/vs_compressibility → 1 cuando γ → 0."""
        result = perturbative(1e-6)
        assert result.vs_spectrum / result.vs_compressibility == pytest.approx(1.0, abs=1e-3)

    def test_derivative_pipeline(self):
        """Test que las derivadas numéricas de e(γ) reproducen μ y v_s cerrados."""
        for gamma in (0.5, 1.0, 3.0):
            result = perturbative(gamma)
            assert compressibility_mu(perturbative_energy, gamma) == pytest.approx(
                result.mu, rel=1e-6
            )
            assert compressibility_sound(perturbative_energy, gamma) == pytest.approx(
                result.vs_compressibility, rel=1e-6
            )


class TestDispersion:
    """Tests para bogoliubov_dispersion."""

    def test_value(self):
        """Test de ε(2) con γ = ρ = 1."""
        assert bogoliubov_dispersion(2.0, 1.0) == pytest.approx(5.6568542, abs=1e-7)

    def test_free_particle(self):
        """Test de γ = 0: ε = p²."""
        p = np.array([0.0, 0.5, 3.0])
        assert bogoliubov_dispersion(p, 0.0) == pytest.approx(p**2)

    def test_phonon_slope(self):
        """Test de ε/p → 2ρ√γ."""
        p = 1e-6
        assert bogoliubov_dispersion(p, 2.0, rho=1.5) / p == pytest.approx(
            2.0 * 1.5 * math.sqrt(2.0), rel=1e-9
        )

    def test_scalar_input_returns_float(self):
        """Test que una entrada escalar devuelve float."""
        assert isinstance(bogoliubov_dispersion(1.0, 1.0), float)
        assert bogoliubov_dispersion(0.0, 1.0) == 0.0


class TestTruncatedFunctional:
    """Tests para truncated_functional_check."""

    @pytest.mark.parametrize("gamma", [0.1, 1.0, 5.0])
    def test_matches_closed_form(self, gamma):
        """Test de cuadratura contra la forma cerrada."""
        assert truncated_functional_check(gamma) == pytest.approx(
            perturbative_energy(gamma), rel=1e-6
        )

    def test_density_scaling(self):
        """Test de E/N = ρ²·e(γ) con ρ ≠ 1."""
        assert truncated_functional_check(1.0, rho=2.0) == pytest.approx(
            4.0 * perturbative_energy(1.0), rel=1e-6
        )

    def test_combined_integrand_identity(self):
        """Test de la identidad entre el integrando combinado y la forma con σ_k."""
        k = np.random.default_rng(7).uniform(0.1, 5.0, 10)
        assert truncated_integrand(k, 1.3) == pytest.approx(
            truncated_mode_energy(k, 1.3), rel=1e-9
        )

    def test_three_halves_scaling(self):
        """Test de ∫ ∝ (cρ)^{3/2}: cociente 8 entre c = 4 y c = 1."""
        ratio = _truncated_integral(4.0, 1.0, 128) / _truncated_integral(1.0, 1.0, 128)
        assert ratio == pytest.approx(8.0, rel=1e-8)

    def test_positive_gamma_required(self):
        """Test de γ = 0."""
        with pytest.raises(ValueError, match="positivo"):
            truncated_functional_check(0.0)


class TestPerturbativeCurve:
    """Tests para perturbative_curve."""

    def test_curve(self):
        """Test de la curva con un punto sin velocidad por compresibilidad."""
        curve = perturbative_curve([1.0, 50.0])

        assert curve.method is Method.BOGOLIUBOV
        assert curve.e[0] == pytest.approx(perturbative_energy(1.0))
        assert list(curve.failures) == [1]
        assert math.isnan(curve.vs[1])
        assert curve.mu[1] == pytest.approx(2.0 * 50.0 * (1.0 - math.sqrt(50.0) / math.pi))

    def test_invalid_grid(self):
        """Test de malla no creciente."""
        with pytest.raises(ValueError, match="creciente"):
            perturbative_curve([2.0, 1.0])
