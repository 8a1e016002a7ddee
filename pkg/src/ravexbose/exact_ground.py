"""Estado fundamental exacto del gas de Lieb-Liniger.

Resuelve la ecuación integral de Lieb en variables adimensionales

    g(x) = 1/(2π) + (1/π) ∫₋₁¹ λ/(λ² + (x − y)²) g(y) dy

con γ = λ/∫g y e(γ) = (γ/λ)³ ∫ g(x) x² dx. La inversión γ → λ se hace por
Brent y las magnitudes termodinámicas (μ, v_s) salen de derivadas
numéricas de e(γ) con extrapolación de Richardson.
"""

import logging
import math
from collections.abc import Callable, Sequence
from functools import lru_cache

import numpy as np

from ravexbose.constants import (
    DEFAULT_NODES,
    DERIVATIVE_STEP,
    GAMMA_MAX,
    GAMMA_MIN,
    MAX_NODES,
    NODE_BLOCK,
    NODES_PER_INVERSE_WIDTH,
    ROOT_XTOL,
)
from ravexbose.exceptions import (
    BracketingException,
    CouplingRangeException,
    SolverException,
)
from ravexbose.models import LiebGroundSolution, Method, ThermoCurve
from ravexbose.numerics import (
    brent_root,
    expand_bracket,
    gauss_legendre,
    lorentzian_system,
    nystrom_solve,
    richardson_derivative,
)
from ravexbose.sweeps import POINT_ERRORS, PointResult, SweepRunner

logger = logging.getLogger(__name__)

# λ mínimo que la malla más fina (MAX_NODES) todavía resuelve
LAMBDA_FLOOR = NODES_PER_INVERSE_WIDTH / MAX_NODES


def effective_nodes(lam: float, n_nodes: int = DEFAULT_NODES) -> int:
    """Nodos usados para un λ dado: al menos 16/λ, en bloques de 16, sin pasar de 4096."""
    needed = NODE_BLOCK * math.ceil(NODES_PER_INVERSE_WIDTH / (lam * NODE_BLOCK))
    return max(n_nodes, min(MAX_NODES, needed))


def check_gamma(gamma: float) -> None:
    """Valida que γ esté en el rango soportado.

    Raises:
        ValueError: Si γ no es finito y positivo.
        CouplingRangeException: Si γ ∉ [GAMMA_MIN, GAMMA_MAX].
    """
    if not (math.isfinite(gamma) and gamma > 0):
        raise ValueError(f"γ debe ser positivo y finito, se recibió {gamma!r}")
    if not GAMMA_MIN <= gamma <= GAMMA_MAX:
        raise CouplingRangeException(
            f"γ={gamma!r} fuera del rango soportado [{GAMMA_MIN}, {GAMMA_MAX}]"
        )


@lru_cache(maxsize=4096)
def solve_dimensionless(
    lam: float, n_nodes: int = DEFAULT_NODES, rho: float = 1.0
) -> LiebGroundSolution:
    """Resuelve la ecuación de Lieb para un λ dado.

    Args:
        lam: λ = c/K > 0
        n_nodes: Nodos mínimos de Gauss-Legendre; para λ pequeño se usan más
        rho: Densidad usada para reportar K = γρ/λ

    Returns:
        LiebGroundSolution con g, γ(λ) y e(γ).

    Raises:
        ValueError: Si λ ≤ 0 o n_nodes < 16.
        SingularSystemException: Si el sistema lineal es singular.
        SolverException: Si el residuo lineal no alcanza la tolerancia.
    """
    if not (math.isfinite(lam) and lam > 0):
        raise ValueError("λ debe ser positivo y finito")
    if n_nodes < 16:
        raise ValueError("Se requieren al menos 16 nodos")

    grid = gauss_legendre(effective_nodes(lam, n_nodes), -1.0, 1.0)
    rhs = np.full(grid.size, 1.0 / (2.0 * math.pi))
    g, report = nystrom_solve(lorentzian_system(grid, lam, rhs))
    if not report.converged:
        raise SolverException(
            f"Ecuación de Lieb con λ={lam!r}: residuo {report.residual:.3e}"
        )

    gamma = lam / grid.integrate(g)
    e = (gamma / lam) ** 3 * grid.integrate(g * grid.nodes**2)
    logger.debug("λ=%.6g n=%d → γ=%.12g e=%.12g", lam, grid.size, gamma, e)
    return LiebGroundSolution(
        lam=lam,
        k_cutoff=gamma * rho / lam,
        rho=rho,
        nodes=grid.nodes,
        weights=grid.weights,
        g_values=g,
        gamma=gamma,
        e_dimensionless=e,
        report=report,
    )


def _bracket_below(
    defect: Callable[[float], float], hi: float, floor: float
) -> tuple[float, float]:
    """Reduce λ a la mitad desde ``hi`` (con defecto positivo) hasta cambiar de signo."""
    lo = 0.5 * hi
    while lo > floor and defect(lo) > 0:
        hi, lo = lo, 0.5 * lo
    if lo <= floor:
        lo = floor
        if defect(lo) > 0:
            raise CouplingRangeException(
                f"La raíz requiere λ < {LAMBDA_FLOOR!r}, no resoluble con {MAX_NODES} nodos"
            )
    return lo, hi


@lru_cache(maxsize=4096)
def gamma_to_lambda(
    gamma: float, tol: float = ROOT_XTOL, n_nodes: int = DEFAULT_NODES
) -> float:
    """Invierte γ(λ) por Brent.

    γ(λ) es creciente y γ(λ) ≤ πλ, por lo que λ* ≥ γ/π. La búsqueda parte de
    max(γ/π, √γ/2), que es λ* a primer orden en ambos límites; desde ahí
    el intervalo se expande hacia arriba o se reduce a la mitad hacia abajo,
    sin bajar de max(γ/π, LAMBDA_FLOOR); λ = LAMBDA_FLOOR sólo se evalúa si
    la raíz está por debajo de √γ/4.

    Raises:
        CouplingRangeException: Si γ está fuera de rango o no se puede encerrar la raíz.
    """
    check_gamma(gamma)

    def defect(lam: float) -> float:
        return solve_dimensionless(lam, n_nodes).gamma - gamma

    floor = max(gamma / math.pi, LAMBDA_FLOOR)
    seed = max(floor, 0.5 * math.sqrt(gamma))
    try:
        if defect(seed) > 0:
            lo, hi = _bracket_below(defect, seed, floor)
        else:
            lo, hi = expand_bracket(defect, seed, 2.0 * seed, floor=seed)
        lam = brent_root(defect, lo, hi, tol=tol)
    except BracketingException as e:
        raise CouplingRangeException(
            f"No se pudo invertir γ={gamma!r}: {e.message}"
        ) from e
    logger.debug("γ=%.12g → λ=%.15g", gamma, lam)
    return lam


def solve_at_gamma(
    gamma: float, rho: float = 1.0, n_nodes: int = DEFAULT_NODES
) -> LiebGroundSolution:
    """Solución de Lieb en el λ que reproduce γ."""
    return solve_dimensionless(gamma_to_lambda(gamma, n_nodes=n_nodes), n_nodes, rho)


@lru_cache(maxsize=16384)
def ground_energy(gamma: float, n_nodes: int = DEFAULT_NODES) -> float:
    """e(γ) exacta, con E₀/N = ρ²·e(γ)."""
    return solve_at_gamma(gamma, n_nodes=n_nodes).e_dimensionless


# ---------------------------------------------------------------------------
# Termodinámica a partir de cualquier e(γ)
# ---------------------------------------------------------------------------


def _step(gamma: float) -> float:
    return DERIVATIVE_STEP * max(gamma, 1.0)


def compressibility_mu(
    energy: Callable[[float], float],
    gamma: float,
    lower: float = 0.0,
    upper: float = math.inf,
) -> float:
    """μ/ρ² = 3e − γ e′ para una función de energía adimensional cualquiera."""
    de, _ = richardson_derivative(energy, gamma, _step(gamma), lower, upper)
    return 3.0 * energy(gamma) - gamma * de


def compressibility_sound(
    energy: Callable[[float], float],
    gamma: float,
    lower: float = 0.0,
    upper: float = math.inf,
) -> float:
    """v_s/ρ = 2√(μ̃ − γμ̃′/2), con μ̃ = μ/ρ² de ``compressibility_mu``.

    Raises:
        SolverException: Si el radicando es negativo.
    """

    def mu(g: float) -> float:
        return compressibility_mu(energy, g, lower, upper)

    dmu, _ = richardson_derivative(mu, gamma, _step(gamma), lower, upper)
    radicand = mu(gamma) - 0.5 * gamma * dmu
    if radicand < 0:
        raise SolverException(
            f"Radicando negativo en la velocidad del sonido para γ={gamma!r}: {radicand:.3e}"
        )
    return 2.0 * math.sqrt(radicand)


def _exact_energy(n_nodes: int) -> Callable[[float], float]:
    def energy(g: float) -> float:
        return ground_energy(g, n_nodes)

    return energy


def _in_range(fn: Callable[[], float], gamma: float) -> float:
    check_gamma(gamma)
    try:
        return fn()
    except ValueError as e:
        # el paso de derivación no cabe junto a los bordes del rango
        raise CouplingRangeException(f"γ={gamma!r}: {e}") from e


def chemical_potential(gamma: float, n_nodes: int = DEFAULT_NODES) -> float:
    """μ/ρ² exacto."""
    return _in_range(
        lambda: compressibility_mu(
            _exact_energy(n_nodes), gamma, GAMMA_MIN, GAMMA_MAX
        ),
        gamma,
    )


def sound_velocity(gamma: float, n_nodes: int = DEFAULT_NODES) -> float:
    """v_s/ρ exacta por compresibilidad."""
    return _in_range(
        lambda: compressibility_sound(
            _exact_energy(n_nodes), gamma, GAMMA_MIN, GAMMA_MAX
        ),
        gamma,
    )


def curve_from_results(
    gamma_grid: Sequence[float],
    results: list[PointResult],
    method: Method,
    partial: dict[int, str] | None = None,
) -> ThermoCurve:
    """Arma una ThermoCurve con NaN en los puntos fallidos.

    ``partial`` registra puntos con alguna celda en NaN pero el resto válido.
    """
    columns = np.full((len(gamma_grid), 3), np.nan)
    failures: dict[int, str] = dict(partial or {})
    for result in results:
        if result.ok and result.value is not None:
            columns[result.index] = result.value
        else:
            failures[result.index] = result.error or "desconocido"
    return ThermoCurve(
        gamma_samples=np.asarray(gamma_grid, dtype=np.float64),
        e=columns[:, 0],
        mu=columns[:, 1],
        vs=columns[:, 2],
        method=method,
        failures=failures,
    )


def check_grid(gamma_grid: Sequence[float]) -> None:
    """Valida que la malla de γ sea no vacía y estrictamente creciente."""
    if len(gamma_grid) == 0:
        raise ValueError("La malla de γ no puede estar vacía")
    if np.any(np.diff(np.asarray(gamma_grid, dtype=np.float64)) <= 0):
        raise ValueError("La malla de γ debe ser estrictamente creciente")


def sweep_ground(
    gamma_grid: Sequence[float], n_nodes: int = DEFAULT_NODES, workers: int = 1
) -> ThermoCurve:
    """Barrido exacto de e, μ/ρ² y v_s/ρ.

    Los puntos que fallan quedan como NaN y su error en ``failures``. Si sólo
    fallan las derivadas, e(γ) se conserva y μ, v_s quedan en NaN.
    """
    check_grid(gamma_grid)
    derivative_errors: dict[float, str] = {}

    def derivative(fn: Callable[[float, int], float], gamma: float) -> float:
        try:
            return fn(gamma, n_nodes)
        except POINT_ERRORS as e:
            derivative_errors[gamma] = str(e)
            logger.warning("γ=%.6g: derivada no disponible: %s", gamma, e)
            return math.nan

    def row(gamma: float) -> tuple[float, float, float]:
        return (
            _in_range(lambda: ground_energy(gamma, n_nodes), gamma),
            derivative(chemical_potential, gamma),
            derivative(sound_velocity, gamma),
        )

    results = SweepRunner(workers).run_sync(row, list(gamma_grid))
    partial = {
        i: f"μ/v_s: {derivative_errors[g]}"
        for i, g in enumerate(gamma_grid)
        if g in derivative_errors
    }
    return curve_from_results(gamma_grid, results, Method.EXACT, partial)
