"""Cuadraturas, solver de Nyström, raíces, punto fijo y derivación numérica.

Todas las funciones son puras sobre entradas inmutables y pueden llamarse
desde workers concurrentes de un barrido.
"""

import logging
import math
import warnings
from collections.abc import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.optimize import brentq

from ravexbose.constants import (
    BREAK_FACTOR,
    DEFAULT_DAMPING,
    FIXED_POINT_TOL,
    LINEAR_TOL,
    ROOT_XTOL,
)
from ravexbose.exceptions import BracketingException, SingularSystemException
from ravexbose.models import NystromSystem, QuadratureGrid, SolverReport

logger = logging.getLogger(__name__)

_EPS = float(np.finfo(np.float64).eps)


def _legendre_on(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def gauss_legendre(n: int, a: float, b: float) -> QuadratureGrid:
    """Nodos y pesos de Gauss-Legendre en [a, b].

    Args:
        n: Número de nodos (n ≥ 2)
        a: Extremo inferior
        b: Extremo superior (a < b)

    Returns:
        QuadratureGrid exacta para polinomios de grado ≤ 2n − 1.

    Raises:
        ValueError: Si n < 2 o el intervalo es inválido.

    Example:
        >>> grid = gauss_legendre(2, -1.0, 1.0)
        >>> grid.nodes
        array([-0.57735027,  0.57735027])
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError("El número de nodos debe ser un entero ≥ 2")
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise ValueError("El intervalo debe ser finito con a < b")
    nodes, weights = _legendre_on(n, a, b)
    return QuadratureGrid(
        nodes=nodes, weights=weights, lower=a, upper=b, domain=f"[{a!r}, {b!r}]"
    )


def halfline_grid(n: int, scale: float, k_max: float = math.inf) -> QuadratureGrid:
    """Malla de dos paneles sobre [0, k_max] con nodos agrupados cerca de 0.

    El panel denso cubre [0, k_break] con k_break = 6·scale; el panel
    exterior usa el cambio k = k_break/t con t ∈ [k_break/k_max, 1], de modo
    que colas del tipo 1/k² se integran sin truncar cuando k_max = ∞.
    Las integrales pares sobre ℝ se calculan como 2·∫₀^∞.

    Args:
        n: Número total de nodos (n ≥ 8)
        scale: Escala característica del integrando (p. ej. √(cρ))
        k_max: Corte superior, ``inf`` por defecto

    Returns:
        QuadratureGrid sobre el medio eje.

    Raises:
        ValueError: Si los argumentos son inválidos.
    """
    if not isinstance(n, int) or n < 8:
        raise ValueError("El número de nodos debe ser un entero ≥ 8")
    if not (math.isfinite(scale) and scale > 0):
        raise ValueError("La escala debe ser positiva y finita")
    if not k_max > scale:
        raise ValueError("k_max debe ser mayor que la escala")

    k_break = BREAK_FACTOR * scale
    if k_max <= k_break:
        nodes, weights = _legendre_on(n, 0.0, k_max)
        return QuadratureGrid(
            nodes=nodes,
            weights=weights,
            lower=0.0,
            upper=k_max,
            domain=f"[0, {k_max!r}]",
        )

    n_dense = n // 2
    dense_k, dense_w = _legendre_on(n_dense, 0.0, k_break)
    t_min = 0.0 if math.isinf(k_max) else k_break / k_max
    t, w_t = _legendre_on(n - n_dense, t_min, 1.0)
    # k = k_break/t, dk = k_break/t² dt; se invierte el orden para que k crezca
    tail_k = (k_break / t)[::-1]
    tail_w = (w_t * k_break / t**2)[::-1]
    return QuadratureGrid(
        nodes=np.concatenate([dense_k, tail_k]),
        weights=np.concatenate([dense_w, tail_w]),
        lower=0.0,
        upper=k_max,
        domain=f"halfline(scale={scale!r}, k_break={k_break!r}, k_max={k_max!r})",
    )


def lorentzian_system(
    grid: QuadratureGrid, width: float, inhomogeneity: np.ndarray
) -> NystromSystem:
    """Sistema de Nyström para el núcleo (1/π)·width/(width² + (x − y)²).

    El término diagonal usa sustracción de singularidad: la fila i integra
    el núcleo analíticamente sobre [a, b] y resta la suma de cuadratura
    fuera de la diagonal, de modo que un núcleo angosto (λ pequeño) no
    degrada la solución.

    Args:
        grid: Malla finita [a, b]
        width: Ancho del lorentziano (λ > 0)
        inhomogeneity: Término independiente en los nodos

    Returns:
        NystromSystem listo para ``nystrom_solve``.
    """
    if not width > 0:
        raise ValueError("El ancho del núcleo debe ser positivo")
    x = grid.nodes
    diff = x[:, None] - x[None, :]
    lorentz = width / (width**2 + diff**2)
    matrix = lorentz * grid.weights[None, :]
    np.fill_diagonal(matrix, 0.0)
    row_integral = np.arctan((grid.upper - x) / width) + np.arctan(
        (x - grid.lower) / width
    )
    np.fill_diagonal(matrix, row_integral - matrix.sum(axis=1))
    return NystromSystem(
        grid=grid, kernel_matrix=matrix / math.pi, inhomogeneity=inhomogeneity
    )


def nystrom_solve(
    system: NystromSystem, tol: float = LINEAR_TOL
) -> tuple[np.ndarray, SolverReport]:
    """Resuelve (I − K)φ = rhs por LU densa con pivoteo parcial.

    Args:
        system: Sistema de Nyström bien formado
        tol: Tolerancia relativa del residuo respecto a max|rhs|

    Returns:
        Tupla (φ, reporte) con el residuo max|φ − Kφ − rhs|.

    Raises:
        SingularSystemException: Si (I − K) es singular.
    """
    kernel = system.kernel_matrix
    rhs = system.inhomogeneity
    n = rhs.size
    matrix = np.eye(n) - kernel

    with warnings.catch_warnings():
        warnings.simplefilter("error", LinAlgWarning)
        try:
            lu, piv = lu_factor(matrix, check_finite=False)
        except (LinAlgWarning, np.linalg.LinAlgError) as e:
            raise SingularSystemException(f"Sistema de Nyström singular: {e}") from e

    pivots = np.abs(np.diag(lu))
    if pivots.min() <= n * _EPS * pivots.max():
        raise SingularSystemException(
            f"Sistema de Nyström singular: pivote mínimo {pivots.min():.3e}"
        )

    phi = lu_solve((lu, piv), rhs, check_finite=False)
    defect = phi - kernel @ phi - rhs
    # Un paso de refinamiento iterativo
    phi = phi - lu_solve((lu, piv), defect, check_finite=False)
    residual = float(np.max(np.abs(phi - kernel @ phi - rhs)))
    tolerance = tol * max(float(np.max(np.abs(rhs))), np.finfo(np.float64).tiny)
    report = SolverReport(
        iterations=1,
        residual=residual,
        converged=residual <= tolerance,
        nodes_used=n,
        tolerance=tolerance,
    )
    logger.debug("Nyström n=%d residuo=%.3e", n, residual)
    return phi, report


def brent_root(
    f: Callable[[float], float], lo: float, hi: float, tol: float = ROOT_XTOL
) -> float:
    """Raíz de ``f`` en [lo, hi] por el método de Brent.

    Args:
        f: Función escalar
        lo: Extremo inferior del intervalo
        hi: Extremo superior del intervalo
        tol: Tolerancia absoluta en x

    Returns:
        La raíz encontrada.

    Raises:
        BracketingException: Si f(lo) y f(hi) tienen el mismo signo.
    """
    f_lo = f(lo)
    if f_lo == 0.0:
        return lo
    f_hi = f(hi)
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise BracketingException(
            f"Sin cambio de signo en [{lo!r}, {hi!r}]: f={f_lo:.3e}, {f_hi:.3e}"
        )
    root, info = brentq(
        f, lo, hi, xtol=tol, rtol=4 * _EPS, maxiter=200, full_output=True
    )
    if not info.converged:
        raise BracketingException(f"Brent no convergió: {info.flag}")
    return float(root)


def expand_bracket(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    factor: float = 2.0,
    max_steps: int = 60,
    floor: float = 0.0,
) -> tuple[float, float]:
    """Expande geométricamente [lo, hi] (0 < lo < hi) hasta encerrar un cambio de signo.

    En cada paso se aleja el extremo con |f| menor. ``lo`` nunca baja de
    ``floor``.

    Raises:
        BracketingException: Si no se encuentra cambio de signo.
    """
    if not 0 < lo < hi:
        raise ValueError("Se requiere 0 < lo < hi")
    f_lo, f_hi = f(lo), f(hi)
    for _ in range(max_steps):
        if f_lo * f_hi <= 0:
            return lo, hi
        if abs(f_lo) < abs(f_hi) and lo / factor > floor:
            lo /= factor
            f_lo = f(lo)
        else:
            hi *= factor
            f_hi = f(hi)
    if f_lo * f_hi <= 0:
        return lo, hi
    raise BracketingException(
        f"No se encontró cambio de signo tras {max_steps} expansiones: [{lo!r}, {hi!r}]"
    )


def damped_fixed_point(
    mapping: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    damping: float = DEFAULT_DAMPING,
    tol: float = FIXED_POINT_TOL,
    max_iter: int = 1000,
) -> tuple[np.ndarray, SolverReport]:
    """Iteración de punto fijo amortiguada x ← (1 − α)x + α·map(x).

    Converge cuando la norma máxima de la actualización es < tol. Si se
    agotan las iteraciones, o la actualización deja de ser finita, se
    retorna un reporte no convergido y el llamador decide si reintenta
    con un α menor.

    Args:
        mapping: Aplicación vectorial
        x0: Aproximación inicial
        damping: α ∈ (0, 1]
        tol: Tolerancia de la actualización
        max_iter: Iteraciones máximas (≥ 1)

    Returns:
        Tupla (x*, reporte).

    Example:
        >>> x, report = damped_fixed_point(np.cos, np.array([1.0]), damping=1.0)
        >>> round(float(x[0]), 6)
        0.739085
    """
    if not 0 < damping <= 1:
        raise ValueError("El amortiguamiento debe estar en (0, 1]")
    if max_iter < 1:
        raise ValueError("max_iter debe ser ≥ 1")

    x = np.array(x0, dtype=np.float64)
    update = math.inf
    for iteration in range(1, max_iter + 1):
        x_next = (1.0 - damping) * x + damping * np.asarray(mapping(x))
        update = float(np.max(np.abs(x_next - x)))
        x = x_next
        if not math.isfinite(update):
            break
        if update < tol:
            return x, SolverReport(
                iterations=iteration, residual=update, converged=True, tolerance=tol
            )
    logger.debug("Punto fijo sin converger: actualización %.3e", update)
    return x, SolverReport(
        iterations=iteration,
        residual=update if math.isfinite(update) else math.inf,
        converged=False,
        tolerance=tol,
    )


def richardson_derivative(
    f: Callable[[float], float],
    x: float,
    h0: float,
    lower: float = -math.inf,
    upper: float = math.inf,
) -> tuple[float, float]:
    """Derivada central con un nivel de extrapolación de Richardson.

    D(h) = (f(x+h) − f(x−h))/(2h); el valor es (4D(h) − D(2h))/3 y el
    error estimado |valor − D(h)|. El paso se reduce a la mitad hasta que
    [x − 2h, x + 2h] quede dentro de (lower, upper).

    Returns:
        Tupla (derivada, error estimado).

    Raises:
        ValueError: Si no cabe ningún paso razonable en el dominio.
    """
    if not h0 > 0:
        raise ValueError("El paso inicial debe ser positivo")
    h = h0
    for _ in range(30):
        if x - 2 * h > lower and x + 2 * h < upper:
            break
        h /= 2
    else:
        raise ValueError(f"No cabe un paso de derivación en el dominio alrededor de {x!r}")

    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + 2 * h) - f(x - 2 * h)) / (4 * h)
    value = (4 * d1 - d2) / 3
    return value, abs(value - d1)
