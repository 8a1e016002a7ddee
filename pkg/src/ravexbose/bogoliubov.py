"""Teoría de perturbaciones de Bogoliubov (gaussiano truncado) en forma cerrada."""

import logging
import math
from collections.abc import Sequence

import numpy as np

from ravexbose.constants import DEFAULT_NODES
from ravexbose.exact_ground import check_grid
from ravexbose.exceptions import SolverException
from ravexbose.models import BogoliubovResult, Method, ThermoCurve
from ravexbose.numerics import halfline_grid

logger = logging.getLogger(__name__)

# Tolerancia relativa entre la cuadratura con n y con n/2 nodos
TAIL_TOL = 1e-8


def _check_gamma(gamma: float) -> None:
    if not (math.isfinite(gamma) and gamma >= 0):
        raise ValueError(f"γ debe ser no negativo y finito, se recibió {gamma!r}")


def perturbative_energy(gamma: float) -> float:
    """e(γ) = γ − 4γ^{3/2}/(3π)."""
    _check_gamma(gamma)
    return gamma - 4.0 * gamma**1.5 / (3.0 * math.pi)


def perturbative(gamma: float, rho: float = 1.0) -> BogoliubovResult:
    """Energía, potencial químico y velocidades del sonido perturbativas.

    La velocidad por compresibilidad es NaN cuando γ − γ^{3/2}/(2π) < 0.

    Example:
        >>> result = perturbative(1.0)
        >>> round(result.e, 7), round(result.vs_spectrum, 7)
        (0.5755868, 2.0)
    """
    _check_gamma(gamma)
    root = math.sqrt(gamma)
    radicand = gamma - gamma * root / (2.0 * math.pi)
    return BogoliubovResult(
        gamma=gamma,
        rho=rho,
        e=perturbative_energy(gamma),
        mu=2.0 * gamma * (1.0 - root / math.pi),
        vs_compressibility=2.0 * math.sqrt(radicand) if radicand >= 0 else math.nan,
        vs_spectrum=2.0 * root,
    )


def bogoliubov_dispersion(
    p: float | np.ndarray, gamma: float, rho: float = 1.0
) -> float | np.ndarray:
    """ε(p) = √(p⁴ + 4cρp²) con c = γρ."""
    c = gamma * rho
    if np.ndim(p) == 0:
        p = float(p)
        return math.sqrt(p**4 + 4.0 * c * rho * p**2)
    p = np.asarray(p, dtype=np.float64)
    return np.sqrt(p**4 + 4.0 * c * rho * p**2)


def truncated_integrand(k: np.ndarray, gamma: float, rho: float = 1.0) -> np.ndarray:
    """ε(k) − k² − 2cρ escrito como −8(cρ)²/(k + √(k² + 4cρ))², sin cancelación."""
    a = gamma * rho**2
    k = np.asarray(k, dtype=np.float64)
    return -8.0 * a**2 / (k + np.sqrt(k**2 + 4.0 * a)) ** 2


def truncated_mode_energy(k: np.ndarray, gamma: float, rho: float = 1.0) -> np.ndarray:
    """k²(cosh 2σ − 1) − 2cρ sinh 2σ + 2cρ(cosh 2σ − 1) con tanh 2σ = 2cρ/(k² + 2cρ)."""
    a = gamma * rho**2
    k = np.asarray(k, dtype=np.float64)
    t = 2.0 * a / (k**2 + 2.0 * a)
    cosh = 1.0 / np.sqrt(1.0 - t**2)
    sinh = t * cosh
    return k**2 * (cosh - 1.0) - 2.0 * a * sinh + 2.0 * a * (cosh - 1.0)


def _truncated_integral(gamma: float, rho: float, n_nodes: int) -> float:
    grid = halfline_grid(n_nodes, math.sqrt(gamma) * rho)
    return 2.0 * grid.integrate(truncated_integrand(grid.nodes, gamma, rho))


def truncated_functional_check(
    gamma: float, rho: float = 1.0, n_nodes: int = DEFAULT_NODES
) -> float:
    """E/N del funcional truncado por cuadratura del integrando combinado.

    E/L = cρ² + (1/4π)∫[ε(k) − k² − 2cρ]dk sobre ℝ.

    Raises:
        ValueError: Si γ ≤ 0.
        SolverException: Si la cuadratura con n y n/2 nodos difiere más de 1e-8.
    """
    _check_gamma(gamma)
    if gamma == 0:
        raise ValueError("γ debe ser positivo")
    fine = _truncated_integral(gamma, rho, n_nodes)
    coarse = _truncated_integral(gamma, rho, max(n_nodes // 2, 8))
    if abs(fine - coarse) > TAIL_TOL * abs(fine):
        raise SolverException(
            f"Cuadratura del funcional truncado sin converger: {fine!r} vs {coarse!r}"
        )
    energy_density = gamma * rho**3 + fine / (4.0 * math.pi)
    return energy_density / rho


def perturbative_curve(gamma_grid: Sequence[float], rho: float = 1.0) -> ThermoCurve:
    """Curvas e, μ/ρ² y v_s/ρ perturbativas (v_s por compresibilidad)."""
    check_grid(gamma_grid)
    results = [perturbative(g, rho) for g in gamma_grid]
    failures = {
        i: "radicando negativo en la velocidad por compresibilidad"
        for i, r in enumerate(results)
        if math.isnan(r.vs_compressibility)
    }
    if failures:
        logger.info("Velocidad perturbativa indefinida en %d puntos", len(failures))
    return ThermoCurve(
        gamma_samples=np.asarray(gamma_grid, dtype=np.float64),
        e=[r.e for r in results],
        mu=[r.mu for r in results],
        vs=[r.vs_compressibility for r in results],
        method=Method.BOGOLIUBOV,
        failures=failures,
    )
