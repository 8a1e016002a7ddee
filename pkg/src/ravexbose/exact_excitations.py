"""Ramas de excitación exactas (tipo I y tipo II).

Cada rama se obtiene resolviendo, para cada q, una ecuación de Fredholm
con el mismo núcleo lorentziano que el estado fundamental y un término
independiente que depende de q. Se trabaja en la variable x = k/K.
"""

import logging
import math

import numpy as np
from numpy.polynomial import polynomial as P

from ravexbose.constants import (
    DEFAULT_NODES,
    DEFAULT_Q_POINTS,
    MAX_FAILED_FRACTION,
    MIN_Q_POINTS,
    Q_SPAN_FACTOR,
)
from ravexbose.exact_ground import chemical_potential, solve_at_gamma
from ravexbose.exceptions import BranchDomainException, SolverException
from ravexbose.models import (
    BranchType,
    ExcitationBranch,
    LiebGroundSolution,
    QuadratureGrid,
)
from ravexbose.numerics import lorentzian_system, nystrom_solve
from ravexbose.sweeps import SweepRunner

logger = logging.getLogger(__name__)


def _ground_context(
    gamma: float, rho: float, n_nodes: int
) -> tuple[LiebGroundSolution, float]:
    solution = solve_at_gamma(gamma, rho, n_nodes)
    mu = chemical_potential(gamma, n_nodes) * rho**2
    return solution, mu


def _dressed(
    solution: LiebGroundSolution, q: float, sign: float
) -> tuple[np.ndarray, QuadratureGrid]:
    """Resuelve φ = sign·(π − 2atan((q − k)/c))/(2π) + Kφ en la malla de la solución."""
    grid = QuadratureGrid(
        nodes=solution.nodes,
        weights=solution.weights,
        lower=-1.0,
        upper=1.0,
        domain="[-1, 1]",
    )
    c = solution.gamma * solution.rho
    k = solution.k_cutoff * grid.nodes
    rhs = sign * (math.pi - 2.0 * np.arctan((q - k) / c)) / (2.0 * math.pi)
    phi, report = nystrom_solve(lorentzian_system(grid, solution.lam, rhs))
    if not report.converged:
        raise SolverException(f"Excitación q={q!r}: residuo {report.residual:.3e}")
    return phi, grid


def solve_type1(
    gamma: float, q: float, rho: float = 1.0, n_nodes: int = DEFAULT_NODES
) -> tuple[float, float, np.ndarray]:
    """Excitación de partícula para q > K.

    J(k) = (−π + 2atan((q − k)/c))/(2π) + (1/π)∫λ/(λ² + (x−y)²) J dy,
    p = q + K∫J dx y ε₁ = −μ + q² + 2K²∫xJ dx.

    Returns:
        Tupla (p, ε₁, J en los nodos).

    Raises:
        BranchDomainException: Si q ≤ K.
    """
    solution, mu = _ground_context(gamma, rho, n_nodes)
    k_cut = solution.k_cutoff
    if not q > k_cut:
        raise BranchDomainException(f"Tipo I requiere q > K={k_cut!r}, q={q!r}")
    j, grid = _dressed(solution, q, -1.0)
    p = q + k_cut * grid.integrate(j)
    epsilon = -mu + q**2 + 2.0 * k_cut**2 * grid.integrate(grid.nodes * j)
    return p, epsilon, j


def solve_type2(
    gamma: float, q: float, rho: float = 1.0, n_nodes: int = DEFAULT_NODES
) -> tuple[float, float, np.ndarray]:
    """Excitación de hueco para |q| < K.

    G(k) = (π − 2atan((q − k)/c))/(2π) + (1/π)∫λ/(λ² + (x−y)²) G dy,
    p = −q + K∫G dx y ε₂ = μ − q² + 2K²∫xG dx.

    Raises:
        BranchDomainException: Si |q| ≥ K.
    """
    solution, mu = _ground_context(gamma, rho, n_nodes)
    k_cut = solution.k_cutoff
    if not abs(q) < k_cut:
        raise BranchDomainException(f"Tipo II requiere |q| < K={k_cut!r}, q={q!r}")
    g, grid = _dressed(solution, q, 1.0)
    p = -q + k_cut * grid.integrate(g)
    epsilon = mu - q**2 + 2.0 * k_cut**2 * grid.integrate(grid.nodes * g)
    return p, epsilon, g


def branch_q_samples(
    k_cut: float, branch_type: BranchType, n_q: int, span: float = Q_SPAN_FACTOR
) -> np.ndarray:
    """Muestras de q agrupadas cuadráticamente cerca de K, ordenadas por p creciente."""
    s = (np.arange(1, n_q + 1) / n_q) ** 2
    if branch_type is BranchType.TYPE_I:
        return k_cut + span * k_cut * s
    return k_cut * (1.0 - s)


def branch(
    gamma: float,
    branch_type: BranchType,
    n_q: int = DEFAULT_Q_POINTS,
    rho: float = 1.0,
    n_nodes: int = DEFAULT_NODES,
    span: float = Q_SPAN_FACTOR,
    workers: int = 1,
) -> ExcitationBranch:
    """Muestrea una rama completa.

    Tipo I cubre q ∈ (K, K + span·K]; tipo II cubre q ∈ [0, K). Los puntos
    individuales que fallan quedan como NaN.

    Raises:
        ValueError: Si n_q < 8.
        SolverException: Si fallan más del 10% de los puntos.
    """
    if n_q < MIN_Q_POINTS:
        raise ValueError(f"Se requieren al menos {MIN_Q_POINTS} muestras por rama")
    branch_type = BranchType(branch_type)
    solution, mu = _ground_context(gamma, rho, n_nodes)
    q_samples = branch_q_samples(solution.k_cutoff, branch_type, n_q, span)
    solver = solve_type1 if branch_type is BranchType.TYPE_I else solve_type2

    def point(q: float) -> tuple[float, float]:
        p, epsilon, _ = solver(gamma, q, rho, n_nodes)
        return p, epsilon

    results = SweepRunner(workers).run_sync(point, q_samples.tolist())
    values = np.full((n_q, 2), np.nan)
    failures = []
    for result in results:
        if result.ok and result.value is not None:
            values[result.index] = result.value
        else:
            failures.append(f"q={q_samples[result.index]!r}: {result.error}")

    if len(failures) > MAX_FAILED_FRACTION * n_q:
        raise SolverException(
            f"Rama {branch_type} rechazada en γ={gamma!r}: "
            f"{len(failures)} de {n_q} puntos fallaron"
        )
    logger.info(
        "Rama %s γ=%.6g: %d puntos, %d fallidos", branch_type, gamma, n_q, len(failures)
    )
    return ExcitationBranch(
        branch=branch_type,
        gamma=gamma,
        q=q_samples,
        p=values[:, 0],
        epsilon=values[:, 1],
        k_cutoff=solution.k_cutoff,
        mu_used=mu,
        failures=failures,
    )


def _valid(branch_data: ExcitationBranch) -> np.ndarray:
    return np.isfinite(branch_data.p) & np.isfinite(branch_data.epsilon)


def phonon_slope(branch_data: ExcitationBranch) -> float:
    """ε/p en la muestra válida de menor p (pendiente fonónica)."""
    valid = _valid(branch_data)
    if not np.any(valid):
        raise SolverException("La rama no tiene muestras válidas")
    i = int(np.argmin(np.where(valid, branch_data.p, np.inf)))
    return float(branch_data.epsilon[i] / branch_data.p[i])


def endpoint_limit(branch_data: ExcitationBranch) -> tuple[float, float]:
    """(p, ε) extrapolados linealmente a q → K con las 3 muestras más cercanas a K."""
    valid = _valid(branch_data)
    if np.count_nonzero(valid) < 3:
        raise SolverException("Se requieren 3 muestras válidas para extrapolar")
    offset = branch_data.q[valid] - branch_data.k_cutoff
    nearest = np.argsort(np.abs(offset))[:3]
    s = offset[nearest]
    p0 = P.polyfit(s, branch_data.p[valid][nearest], 1)[0]
    e0 = P.polyfit(s, branch_data.epsilon[valid][nearest], 1)[0]
    return float(p0), float(e0)
