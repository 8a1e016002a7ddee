"""Campo medio gaussiano autoconsistente.

El estado de prueba es un estado gaussiano desplazado (condensado Γ₀) con
transformación de Bogoliubov σ_k y ocupaciones térmicas ν_k. Con

    a = 2c(ρ − B + A),   b = 2c(ρ − B − A),   Δ(k) = (k² + a)² − b²

las ecuaciones de gap fijan A y B:

    A = (1/4π) ∫ b/√Δ · (1 + 2ν_k) dk
    B = (1/4π) ∫ [(k² + a)/√Δ · (1 + 2ν_k) − 1] dk

con ν_k = 1/(exp(√Δ/T) − 1). Las integrales sobre ℝ se calculan como
2·∫₀^∞ en una malla de medio eje con cola infinita.
"""

import logging
import math
from collections.abc import Callable, Sequence
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.special import xlogy

from ravexbose.constants import (
    DEFAULT_DAMPING,
    DEFAULT_NODES,
    FIXED_POINT_TOL,
    MAX_DAMPING_RETRIES,
    MAX_FIXED_POINT_ITER,
    ROOT_XTOL,
)
from ravexbose.exact_ground import check_grid, compressibility_sound, curve_from_results
from ravexbose.exceptions import ConvergenceException, PhaseException
from ravexbose.models import (
    BogolyubovParams,
    CouplingPoint,
    GaussianSolution,
    Method,
    Phase,
    QuadratureGrid,
    SolverReport,
    SpectrumSample,
    ThermoCurve,
)
from ravexbose.numerics import (
    brent_root,
    damped_fixed_point,
    expand_bracket,
    halfline_grid,
)
from ravexbose.sweeps import SweepRunner

logger = logging.getLogger(__name__)


class ModeTerms(NamedTuple):
    """Funciones de modo evaluadas en una malla de k."""

    e: np.ndarray
    cosh: np.ndarray
    sinh: np.ndarray
    cosh_m1: np.ndarray
    sqrt_delta: np.ndarray
    nu: np.ndarray


def _occupations(energy: np.ndarray, temperature: float) -> np.ndarray:
    if temperature == 0.0:
        return np.zeros_like(energy)
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(energy / temperature)


def _mode_terms(point: CouplingPoint, A: float, B: float, k: np.ndarray) -> ModeTerms:
    c, rho = point.c, point.rho
    if not A > 0:
        raise PhaseException(f"La fase condensada requiere A > 0, A={A!r}")
    if not B < rho:
        raise PhaseException(f"La fase condensada requiere B < ρ, B={B!r}")
    e = k**2
    a = 2.0 * c * (rho - B + A)
    b = 2.0 * c * (rho - B - A)
    sqrt_delta = np.sqrt(e * (e + 2.0 * a) + 16.0 * c**2 * (rho - B) * A)
    cosh = (e + a) / sqrt_delta
    sinh = b / sqrt_delta
    # cosh 2σ − 1 sin cancelación para k grande
    cosh_m1 = b**2 / (sqrt_delta * (e + a + sqrt_delta))
    nu = _occupations(sqrt_delta, point.temperature)
    return ModeTerms(e, cosh, sinh, cosh_m1, sqrt_delta, nu)


def condensed_grid(point: CouplingPoint, n_nodes: int = DEFAULT_NODES) -> QuadratureGrid:
    """Malla de medio eje con escala √(cρ)."""
    return halfline_grid(n_nodes, math.sqrt(point.c * point.rho))


def _integrals(
    point: CouplingPoint, A: float, B: float, grid: QuadratureGrid
) -> tuple[float, float, float, ModeTerms]:
    terms = _mode_terms(point, A, B, grid.nodes)
    depletion = terms.cosh_m1 + 2.0 * terms.nu * terms.cosh
    a_new = grid.integrate((1.0 + 2.0 * terms.nu) * terms.sinh) / (2.0 * math.pi)
    b_new = grid.integrate(depletion) / (2.0 * math.pi)
    c_new = grid.integrate(terms.e * depletion) / (2.0 * math.pi)
    return a_new, b_new, c_new, terms


def bogolyubov_params(
    point: CouplingPoint, A: float, B: float, n_nodes: int = DEFAULT_NODES
) -> BogolyubovParams:
    """tanh 2σ_k y ν_k del estado construido con (A, B) en la malla estándar."""
    grid = condensed_grid(point, n_nodes)
    terms = _mode_terms(point, A, B, grid.nodes)
    return BogolyubovParams(
        k=grid.nodes, tanh_2sigma=terms.sinh / terms.cosh, nu=terms.nu
    )


def gap_residual(
    point: CouplingPoint, A: float, B: float, n_nodes: int = DEFAULT_NODES
) -> float:
    """max(|A − A′|, |B − B′|) con A′, B′ reintegrados en una malla de n_nodes."""
    a_new, b_new, _, _ = _integrals(point, A, B, condensed_grid(point, n_nodes))
    return max(abs(A - a_new), abs(B - b_new))


def _free_gas(point: CouplingPoint) -> GaussianSolution:
    if point.temperature > 0:
        raise PhaseException(
            "El gas ideal 1D no tiene condensado a T > 0; use solve_noncondensed"
        )
    return GaussianSolution(
        point=point,
        A=0.0,
        B=0.0,
        C=0.0,
        condensate_density=point.rho,
        mu=0.0,
        energy_per_particle=0.0,
        free_energy_density=0.0,
        residual=0.0,
        phase=Phase.CONDENSED,
        report=SolverReport(
            iterations=0, residual=0.0, converged=True, tolerance=FIXED_POINT_TOL
        ),
    )


def default_initializer(point: CouplingPoint) -> tuple[float, float]:
    """A₀ = min(ρ√γ/(2π), ρ/2), B₀ = min(A₀/2, ρ/4).

    Las cotas mantienen el punto inicial dentro de la fase condensada
    (B₀ < ρ) también en acoplamiento fuerte.
    """
    rho = point.rho
    a0 = min(rho * math.sqrt(point.gamma) / (2.0 * math.pi), 0.5 * rho)
    return a0, min(0.5 * a0, 0.25 * rho)


def solve_condensed(
    point: CouplingPoint,
    n_nodes: int = DEFAULT_NODES,
    tol: float = FIXED_POINT_TOL,
    initial: tuple[float, float] | None = None,
    damping: float = DEFAULT_DAMPING,
) -> GaussianSolution:
    """Resuelve las ecuaciones de gap en la fase condensada.

    La iteración amortiguada parte de ``initial`` (por defecto
    ``default_initializer``); si no converge, o si A deja de ser positivo,
    se reintenta con el amortiguamiento a la mitad. Si el mapa sale de la
    fase condensada también se reduce el punto inicial.

    Args:
        point: Punto físico (ρ, c, T)
        n_nodes: Nodos de la malla de medio eje
        tol: Tolerancia del residuo de las ecuaciones de gap
        initial: Aproximación inicial (A₀, B₀)
        damping: Amortiguamiento inicial α

    Returns:
        GaussianSolution en la fase condensada.

    Raises:
        PhaseException: Si c = 0 y T > 0, o si A ≤ 0 persiste en todos los intentos.
        ConvergenceException: Si ningún intento converge.
    """
    if point.c == 0.0:
        return _free_gas(point)

    grid = condensed_grid(point, n_nodes)

    def mapping(x: np.ndarray) -> np.ndarray:
        a_new, b_new, _, _ = _integrals(point, float(x[0]), float(x[1]), grid)
        return np.array([a_new, b_new])

    x0 = np.array(initial if initial is not None else default_initializer(point))
    alpha = damping
    iterations = 0
    report: SolverReport | None = None
    phase_error: PhaseException | None = None
    for attempt in range(MAX_DAMPING_RETRIES + 1):
        try:
            x, report = damped_fixed_point(
                mapping, x0, alpha, tol * alpha, MAX_FIXED_POINT_ITER
            )
        except PhaseException as e:
            phase_error = e
            logger.warning("Intento %d (α=%.4g): %s", attempt, alpha, e)
            alpha /= 2
            # punto inicial más cerca de A = B = 0, dentro de la fase condensada
            x0 = np.array([0.5 * x0[0], 0.5 * min(x0[1], point.rho)])
            continue
        iterations += report.iterations
        if report.converged:
            residual = gap_residual(point, float(x[0]), float(x[1]), n_nodes)
            if residual <= tol:
                break
        logger.warning(
            "Ecuaciones de gap sin converger en γ=%.6g (α=%.4g, residuo %.3e)",
            point.gamma,
            alpha,
            report.residual,
        )
        alpha /= 2
    else:
        if report is None and phase_error is not None:
            raise phase_error
        raise ConvergenceException(
            f"Ecuaciones de gap sin converger en γ={point.gamma!r} tras "
            f"{MAX_DAMPING_RETRIES} reintentos",
            report,
        )

    A, B = float(x[0]), float(x[1])
    _, _, C, terms = _integrals(point, A, B, grid)
    logger.debug(
        "γ=%.6g T=%.4g: A=%.12g B=%.12g en %d iteraciones",
        point.gamma,
        point.temperature,
        A,
        B,
        iterations,
    )
    return GaussianSolution(
        point=point,
        A=A,
        B=B,
        C=C,
        condensate_density=point.rho - B,
        mu=2.0 * point.c * (point.rho - A + B),
        energy_per_particle=gaussian_energy(point, A, B, C),
        free_energy_density=free_energy(point, A, B, C, terms.nu, grid),
        residual=residual,
        phase=Phase.CONDENSED,
        report=SolverReport(
            iterations=iterations,
            residual=residual,
            converged=True,
            nodes_used=grid.size,
            tolerance=tol,
        ),
    )


def gaussian_dispersion(
    point: CouplingPoint, A: float, B: float, k: float | np.ndarray
) -> np.ndarray:
    """e_g(k) = √(k⁴ + 4ck²(ρ − B + A) + 16c²(ρ − B)A), vectorizada."""
    c, rho = point.c, point.rho
    e = np.asarray(k, dtype=np.float64) ** 2
    radicand = e**2 + 4.0 * c * e * (rho - B + A) + 16.0 * c**2 * (rho - B) * A
    if np.any(radicand < 0):
        raise PhaseException("Radicando negativo en el espectro gaussiano")
    return np.sqrt(radicand)


def gaussian_spectrum(
    point: CouplingPoint, A: float, B: float, k_grid: Sequence[float] | np.ndarray
) -> list[SpectrumSample]:
    """Espectro de excitación gaussiano en los momentos dados."""
    k = np.asarray(k_grid, dtype=np.float64)
    energies = gaussian_dispersion(point, A, B, k)
    return [
        SpectrumSample(k=float(ki), energy=float(ei))
        for ki, ei in zip(k, energies, strict=True)
    ]


def solution_dispersion(
    solution: GaussianSolution, k: float | np.ndarray
) -> np.ndarray:
    """Espectro de una solución en cualquiera de las dos fases."""
    if solution.phase is Phase.NON_CONDENSED:
        return np.asarray(k, dtype=np.float64) ** 2 + solution.gap
    return gaussian_dispersion(solution.point, solution.A, solution.B, k)


def gaussian_energy(point: CouplingPoint, A: float, B: float, C: float) -> float:
    """E/N = C/ρ − 2c(A−B) + (c/ρ)(ρ² + A² − B²) + 2(c/ρ)AB."""
    c, rho = point.c, point.rho
    return (
        C / rho
        - 2.0 * c * (A - B)
        + (c / rho) * (rho**2 + A**2 - B**2)
        + 2.0 * (c / rho) * A * B
    )


def entropy_density(nu: np.ndarray, grid: QuadratureGrid) -> float:
    """S/L = (1/2π) ∫ [(1+ν)ln(1+ν) − ν ln ν] dk sobre ℝ."""
    nu = np.asarray(nu, dtype=np.float64)
    if np.any(nu < 0):
        raise ValueError("Las ocupaciones ν_k deben ser no negativas")
    s = xlogy(1.0 + nu, 1.0 + nu) - xlogy(nu, nu)
    return grid.integrate(s) / math.pi


def free_energy(
    point: CouplingPoint,
    A: float,
    B: float,
    C: float,
    nu: np.ndarray | None = None,
    grid: QuadratureGrid | None = None,
) -> float:
    """F/L = C − 2cρ(A−B) + c(ρ² + A² − B²) + 2cAB − T·S/L.

    Raises:
        ValueError: Si T > 0 sin ν_k o con ν_k < 0.
    """
    c, rho, temperature = point.c, point.rho, point.temperature
    energy = C - 2.0 * c * rho * (A - B) + c * (rho**2 + A**2 - B**2) + 2.0 * c * A * B
    if nu is None or grid is None:
        if temperature > 0:
            raise ValueError("A T > 0 se requieren ν_k y su malla")
        return energy
    entropy = entropy_density(nu, grid)
    return energy - temperature * entropy


def free_energy_functional(
    point: CouplingPoint, A_trial: float, B_trial: float, n_nodes: int = DEFAULT_NODES
) -> float:
    """F/L del estado gaussiano cuyos σ_k, ν_k se construyen con (A, B) de prueba.

    Las integrales A, B, C se recalculan a partir de ese estado, de modo
    que el funcional es estacionario en el punto fijo de las ecuaciones
    de gap.
    """
    grid = condensed_grid(point, n_nodes)
    A, B, C, terms = _integrals(point, A_trial, B_trial, grid)
    return free_energy(point, A, B, C, terms.nu, grid)


# ---------------------------------------------------------------------------
# Fase no condensada
# ---------------------------------------------------------------------------


def _noncondensed_grid(point: CouplingPoint, z: float, n_nodes: int) -> QuadratureGrid:
    return halfline_grid(n_nodes, math.sqrt(min(z, point.temperature)))


def _density_at(point: CouplingPoint, z: float, n_nodes: int) -> float:
    grid = _noncondensed_grid(point, z, n_nodes)
    nu = _occupations(grid.nodes**2 + z, point.temperature)
    return grid.integrate(nu) / math.pi


def noncondensed_density(
    point: CouplingPoint, mu: float, n_nodes: int = DEFAULT_NODES
) -> float:
    """(1/2π) ∫ dk / (exp[(k² − μ + 4cρ)/T] − 1) sobre ℝ.

    Raises:
        PhaseException: Si T = 0.
        ValueError: Si 4cρ − μ ≤ 0.
    """
    if point.temperature == 0.0:
        raise PhaseException("La fase no condensada requiere T > 0")
    z = 4.0 * point.c * point.rho - mu
    if not z > 0:
        raise ValueError(f"Se requiere μ < 4cρ, μ={mu!r}")
    return _density_at(point, z, n_nodes)


def solve_noncondensed(
    point: CouplingPoint, n_nodes: int = DEFAULT_NODES, tol: float = FIXED_POINT_TOL
) -> GaussianSolution:
    """Fase no condensada (A = 0, σ_k = 0): fija μ con la ecuación de densidad.

    Se resuelve en z = 4cρ − μ > 0 partiendo del valor clásico T²/(4ρ²).

    Raises:
        PhaseException: Si T = 0.
        BracketingException: Si no se encierra la raíz.
        ConvergenceException: Si la densidad reintegrada no alcanza ``tol``.
    """
    temperature, rho = point.temperature, point.rho
    if temperature == 0.0:
        raise PhaseException("La fase no condensada degenera a T = 0")

    def defect(z: float) -> float:
        return _density_at(point, z, n_nodes) - rho

    z0 = temperature**2 / (4.0 * rho**2)
    lo, hi = expand_bracket(defect, 0.5 * z0, 2.0 * z0)
    z = brent_root(defect, lo, hi, tol=ROOT_XTOL * max(z0, 1.0))

    grid = _noncondensed_grid(point, z, n_nodes)
    nu = _occupations(grid.nodes**2 + z, temperature)
    C = grid.integrate(grid.nodes**2 * nu) / math.pi
    residual = abs(_density_at(point, z, 2 * n_nodes) - rho)
    if residual > tol:
        raise ConvergenceException(
            f"Densidad no condensada reintegrada con defecto {residual:.3e}"
        )
    logger.debug("T=%.4g c=%.4g: z=%.12g", temperature, point.c, z)
    return GaussianSolution(
        point=point,
        A=0.0,
        B=rho,
        C=C,
        condensate_density=0.0,
        mu=4.0 * point.c * rho - z,
        energy_per_particle=gaussian_energy(point, 0.0, rho, C),
        free_energy_density=free_energy(point, 0.0, rho, C, nu, grid),
        residual=residual,
        phase=Phase.NON_CONDENSED,
    )


# ---------------------------------------------------------------------------
# Fluctuaciones del número de partículas
# ---------------------------------------------------------------------------


def number_variance(
    gamma0: float,
    x0: float,
    y0: float,
    nu0: float,
    mode_sums: tuple[float, float],
) -> float:
    """⟨N²⟩ − ⟨N⟩² de un estado gaussiano desplazado con parámetros reales.

    Args:
        gamma0: Amplitud del condensado Γ₀
        x0: cosh σ₀ del modo cero
        y0: sinh σ₀ del modo cero
        nu0: Ocupación térmica del modo cero
        mode_sums: (Σ_k[x²ν + (1+ν)y²], Σ_k{[x²ν + (1+ν)y²]² + x²y²(1+2ν)²})

    Raises:
        ValueError: Si x₀² − y₀² ≠ 1, ν₀ < 0 o alguna suma es negativa.
    """
    if abs(x0**2 - y0**2 - 1.0) > 1e-10 * max(1.0, x0**2):
        raise ValueError("Se requiere x₀² − y₀² = 1 (canonicidad)")
    if nu0 < 0:
        raise ValueError("ν₀ debe ser no negativa")
    occupation_sum, fluctuation_sum = mode_sums
    if occupation_sum < 0 or fluctuation_sum < 0:
        raise ValueError("Las sumas de modos deben ser no negativas")

    g2 = gamma0**2
    condensate = (
        2.0 * g2 * (x0**2 * nu0 + y0**2 * (1.0 + nu0))
        - 2.0 * g2 * x0 * y0 * (1.0 + 2.0 * nu0)
        + g2
    )
    return condensate + occupation_sum + fluctuation_sum


def condensed_number_variance(
    solution: GaussianSolution, length: float, n_nodes: int = DEFAULT_NODES
) -> float:
    """Varianza del número de partículas en una caja de longitud L.

    Los sumatorios de modos se reemplazan por (L/2π)∫dk.
    """
    if solution.phase is not Phase.CONDENSED:
        raise PhaseException("La varianza con condensado requiere la fase condensada")
    if not length > 0:
        raise ValueError("La longitud debe ser positiva")
    point = solution.point
    if point.c == 0.0:
        return number_variance(math.sqrt(length * point.rho), 1.0, 0.0, 0.0, (0.0, 0.0))

    zero = _mode_terms(point, solution.A, solution.B, np.zeros(1))
    cosh0 = float(zero.cosh[0])
    x0 = math.sqrt(0.5 * (cosh0 + 1.0))
    y0 = math.copysign(math.sqrt(0.5 * float(zero.cosh_m1[0])), float(zero.sinh[0]))

    grid = condensed_grid(point, n_nodes)
    terms = _mode_terms(point, solution.A, solution.B, grid.nodes)
    n_k = 0.5 * (terms.cosh_m1 + 2.0 * terms.nu * terms.cosh)
    m_k = 0.5 * terms.sinh * (1.0 + 2.0 * terms.nu)
    # (L/2π)·∫ sobre ℝ = (L/π)·∫₀^∞
    scale = length / math.pi
    mode_sums = (scale * grid.integrate(n_k), scale * grid.integrate(n_k**2 + m_k**2))
    return number_variance(
        math.sqrt(length * solution.condensate_density),
        x0,
        y0,
        float(zero.nu[0]),
        mode_sums,
    )


# ---------------------------------------------------------------------------
# Curvas termodinámicas
# ---------------------------------------------------------------------------


@lru_cache(maxsize=16384)
def _cached_condensed(
    gamma: float, rho: float, temperature: float, n_nodes: int, tol: float
) -> GaussianSolution:
    point = CouplingPoint.from_gamma(gamma, rho, temperature)
    return solve_condensed(point, n_nodes, tol)


def gaussian_energy_curve(
    rho: float = 1.0,
    temperature: float = 0.0,
    n_nodes: int = DEFAULT_NODES,
    tol: float = FIXED_POINT_TOL,
) -> Callable[[float], float]:
    """e(γ) = (E/N)/ρ² gaussiana como función de γ, con caché por punto."""

    def energy(gamma: float) -> float:
        solution = _cached_condensed(gamma, rho, temperature, n_nodes, tol)
        return solution.energy_per_particle / rho**2

    return energy


def sweep_gaussian(
    gamma_grid: Sequence[float],
    rho: float = 1.0,
    temperature: float = 0.0,
    n_nodes: int = DEFAULT_NODES,
    tol: float = FIXED_POINT_TOL,
    workers: int = 1,
) -> ThermoCurve:
    """Barrido gaussiano de e, μ/ρ² y v_s/ρ.

    μ es el de la relación de autoconsistencia 2c(ρ − A + B); v_s sale de
    las derivadas numéricas de e(γ), igual que en la curva exacta.
    """
    check_grid(gamma_grid)
    if temperature < 0:
        raise ValueError("La temperatura debe ser no negativa")
    energy = gaussian_energy_curve(rho, temperature, n_nodes, tol)

    def row(gamma: float) -> tuple[float, float, float]:
        solution = _cached_condensed(gamma, rho, temperature, n_nodes, tol)
        return (
            solution.energy_per_particle / rho**2,
            solution.mu / rho**2,
            compressibility_sound(energy, gamma),
        )

    results = SweepRunner(workers).run_sync(row, list(gamma_grid))
    return curve_from_results(gamma_grid, results, Method.GAUSSIAN)
