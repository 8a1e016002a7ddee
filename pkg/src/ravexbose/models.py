"""Modelos de datos del gas de Bose 1D.

Este módulo contiene los modelos Pydantic que representan los parámetros
físicos, las mallas de cuadratura y los resultados de los tres métodos
(exacto, gaussiano y perturbativo). Las unidades son ħ = 1, 2m = 1, de
modo que e(k) = k², y la constante de Boltzmann vale 1.
"""

from __future__ import annotations

import math
from enum import StrEnum
from typing import Annotated, Any

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    field_validator,
    model_validator,
)


def _as_readonly_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    array.setflags(write=False)
    return array


FloatArray = Annotated[
    np.ndarray,
    BeforeValidator(_as_readonly_array),
    PlainSerializer(lambda a: a.tolist(), return_type=list),
]


class APIBaseModel(BaseModel):
    """Clase base para todos los modelos.

    Los modelos son inmutables para poder compartirse entre workers de un
    barrido. Proporciona serialización JSON con formato legible.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def __str__(self) -> str:
        """Retorna una representación JSON formateada del modelo."""
        return self.model_dump_json(indent=2)


class Method(StrEnum):
    """Método con el que se calculó una curva termodinámica."""

    EXACT = "exact"
    GAUSSIAN = "gaussian"
    BOGOLIUBOV = "bogoliubov"


class BranchType(StrEnum):
    """Rama de excitación exacta: tipo I (partícula) o tipo II (hueco)."""

    TYPE_I = "I"
    TYPE_II = "II"


class Phase(StrEnum):
    """Fase de la solución gaussiana."""

    CONDENSED = "condensed"
    NON_CONDENSED = "non-condensed"


# -----------------------------------Numerics Models-----------------------------------#


class QuadratureGrid(APIBaseModel):
    """Nodos y pesos de cuadratura sobre un dominio.

    Attributes:
        nodes: Abscisas estrictamente crecientes
        weights: Pesos positivos
        lower: Extremo inferior del dominio
        upper: Extremo superior (puede ser ``inf`` en mallas de medio eje)
        domain: Descripción legible del dominio
    """

    nodes: FloatArray
    weights: FloatArray
    lower: float
    upper: float
    domain: str

    @model_validator(mode="after")
    def validate_grid(self) -> QuadratureGrid:
        """Valida longitudes, orden estricto de nodos y pesos positivos."""
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes y weights deben ser vectores de la misma longitud")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("Los nodos deben ser estrictamente crecientes")
        if np.any(self.weights <= 0):
            raise ValueError("Los pesos deben ser positivos")
        return self

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def integrate(self, values: np.ndarray) -> float:
        """Suma ponderada de ``values`` muestreados en los nodos."""
        return float(np.dot(self.weights, values))


class NystromSystem(APIBaseModel):
    """Sistema lineal denso (I − K)φ = rhs de una ecuación de Fredholm.

    Attributes:
        grid: Malla de cuadratura usada en la discretización
        kernel_matrix: Matriz K_ij = K(x_i, x_j)·w_j (n×n)
        inhomogeneity: Término independiente (n)
    """

    grid: QuadratureGrid
    kernel_matrix: FloatArray
    inhomogeneity: FloatArray

    @model_validator(mode="after")
    def validate_shapes(self) -> NystromSystem:
        """Valida dimensiones y que todas las entradas sean finitas."""
        n = self.grid.size
        if self.kernel_matrix.shape != (n, n):
            raise ValueError("kernel_matrix debe ser cuadrada y coincidir con la malla")
        if self.inhomogeneity.shape != (n,):
            raise ValueError("inhomogeneity debe tener un valor por nodo")
        if not np.all(np.isfinite(self.kernel_matrix)):
            raise ValueError("kernel_matrix contiene entradas no finitas")
        if not np.all(np.isfinite(self.inhomogeneity)):
            raise ValueError("inhomogeneity contiene entradas no finitas")
        return self


class SolverReport(APIBaseModel):
    """Reporte de un solver iterativo o lineal.

    Attributes:
        iterations: Número de iteraciones realizadas
        residual: Norma máxima del defecto final
        converged: Si se alcanzó la tolerancia
        nodes_used: Nodos de cuadratura usados (0 si no aplica)
        tolerance: Tolerancia configurada
    """

    iterations: int = Field(ge=0)
    residual: float
    converged: bool
    nodes_used: int = Field(default=0, ge=0)
    tolerance: float = Field(gt=0)

    @model_validator(mode="after")
    def validate_converged(self) -> SolverReport:
        """converged implica residual ≤ tolerance."""
        if self.converged and not self.residual <= self.tolerance:
            raise ValueError("Un reporte convergido debe tener residual ≤ tolerance")
        return self


# -----------------------------------Exact Models-----------------------------------#


class CouplingPoint(APIBaseModel):
    """Parámetros físicos de un punto de cálculo.

    Attributes:
        rho: Densidad de partículas ρ > 0
        c: Semiamplitud del potencial delta (la interacción es 2c·δ), c ≥ 0
        temperature: Temperatura T ≥ 0 en unidades de energía

    Example:
        >>> point = CouplingPoint.from_gamma(1.0)
        >>> point.c, point.gamma
        (1.0, 1.0)
    """

    rho: float = Field(default=1.0, gt=0)
    c: float = Field(ge=0)
    temperature: float = Field(default=0.0, ge=0)

    @field_validator("rho", "c", "temperature")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        """Valida que los parámetros sean finitos."""
        if not math.isfinite(v):
            raise ValueError("Los parámetros físicos deben ser finitos")
        return v

    @property
    def gamma(self) -> float:
        """Acoplamiento adimensional γ = c/ρ."""
        return self.c / self.rho

    @classmethod
    def from_gamma(
        cls, gamma: float, rho: float = 1.0, temperature: float = 0.0
    ) -> CouplingPoint:
        """Construye el punto con c = γρ."""
        return cls(rho=rho, c=gamma * rho, temperature=temperature)


class LiebGroundSolution(APIBaseModel):
    """Solución adimensional de la ecuación de Lieb-Liniger.

    Attributes:
        lam: λ = c/K
        k_cutoff: Momento de corte K = c/λ (en unidades de ρ dada)
        rho: Densidad usada para convertir K
        nodes: Nodos x en [−1, 1]
        weights: Pesos de cuadratura
        g_values: g(x) en los nodos
        gamma: Acoplamiento resultante γ = λ/∫g
        e_dimensionless: e(γ) con E₀/N = ρ²·e(γ)
        report: Reporte del solver lineal
    """

    lam: float = Field(gt=0)
    k_cutoff: float = Field(gt=0)
    rho: float = Field(default=1.0, gt=0)
    nodes: FloatArray
    weights: FloatArray
    g_values: FloatArray
    gamma: float = Field(gt=0)
    e_dimensionless: float
    report: SolverReport

    @model_validator(mode="after")
    def validate_g(self) -> LiebGroundSolution:
        """g(x) debe ser simétrica y acotada inferiormente por 1/(2π)."""
        scale = float(np.max(np.abs(self.g_values)))
        if np.max(np.abs(self.g_values - self.g_values[::-1])) > 1e-10 * scale:
            raise ValueError("g(x) debe ser simétrica en la malla")
        if np.min(self.g_values) < (1.0 - 1e-9) / (2.0 * math.pi):
            raise ValueError("g(x) debe ser ≥ 1/(2π)")
        return self


class ThermoCurve(APIBaseModel):
    """Curvas e(γ), μ(γ)/ρ² y v_s(γ)/ρ muestreadas por un método.

    Los puntos fallidos se guardan como NaN y su mensaje queda en
    ``failures`` indexado por posición.

    Attributes:
        gamma_samples: Valores de γ estrictamente crecientes
        e: Energía adimensional e(γ)
        mu: Potencial químico en unidades de ρ²
        vs: Velocidad del sonido en unidades de ρ
        method: Método usado
        failures: Errores por índice de muestra
    """

    gamma_samples: FloatArray
    e: FloatArray
    mu: FloatArray
    vs: FloatArray
    method: Method
    failures: dict[int, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_lengths(self) -> ThermoCurve:
        """Todas las listas deben tener la misma longitud y γ ser creciente."""
        n = self.gamma_samples.size
        if n == 0:
            raise ValueError("La curva debe tener al menos un punto")
        if not (self.e.size == self.mu.size == self.vs.size == n):
            raise ValueError("e, mu y vs deben tener la misma longitud que gamma")
        if np.any(np.diff(self.gamma_samples) <= 0):
            raise ValueError("gamma_samples debe ser estrictamente creciente")
        return self


# -----------------------------------Excitation Models-----------------------------------#


class ExcitationSample(APIBaseModel):
    """Una muestra (q, p, ε) de una rama de excitación."""

    q: float
    p: float
    epsilon: float


class ExcitationBranch(APIBaseModel):
    """Rama de excitación exacta muestreada paramétricamente en q.

    Attributes:
        branch: Tipo de rama
        gamma: Acoplamiento
        q: Parámetro de momento desnudo
        p: Momento físico (unidades de ρ), creciente
        epsilon: Energía de excitación (unidades de ρ²)
        k_cutoff: K usado
        mu_used: Potencial químico exacto usado
        failures: Mensajes de los puntos que fallaron
    """

    branch: BranchType
    gamma: float = Field(gt=0)
    q: FloatArray
    p: FloatArray
    epsilon: FloatArray
    k_cutoff: float = Field(gt=0)
    mu_used: float
    failures: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_samples(self) -> ExcitationBranch:
        """ε ≥ −tol y p monótono creciente sobre las muestras válidas."""
        if not (self.q.size == self.p.size == self.epsilon.size):
            raise ValueError("q, p y epsilon deben tener la misma longitud")
        valid = np.isfinite(self.p) & np.isfinite(self.epsilon)
        if np.any(self.epsilon[valid] < -1e-8):
            raise ValueError("Las energías de excitación deben ser no negativas")
        if np.any(np.diff(self.p[valid]) <= 0):
            raise ValueError("p debe ser estrictamente creciente a lo largo de la rama")
        return self

    @property
    def points(self) -> list[ExcitationSample]:
        return [
            ExcitationSample(q=float(q), p=float(p), epsilon=float(e))
            for q, p, e in zip(self.q, self.p, self.epsilon, strict=True)
        ]


# -----------------------------------Gaussian Models-----------------------------------#


class GaussianSolution(APIBaseModel):
    """Solución autoconsistente del campo medio gaussiano.

    Attributes:
        point: Punto físico (ρ, c, T)
        A: Integral de apareamiento anómalo
        B: Integral de depleción
        C: Integral cinética
        condensate_density: Γ₀²/L = ρ − B
        mu: Potencial químico
        energy_per_particle: E/N
        free_energy_density: F/L
        residual: Defecto máximo de las ecuaciones de gap
        phase: Fase de la solución
        report: Reporte de la iteración
    """

    point: CouplingPoint
    A: float
    B: float
    C: float
    condensate_density: float
    mu: float
    energy_per_particle: float
    free_energy_density: float
    residual: float = Field(ge=0)
    phase: Phase
    report: SolverReport | None = None

    @model_validator(mode="after")
    def validate_phase(self) -> GaussianSolution:
        """Comprueba los invariantes propios de cada fase."""
        rho = self.point.rho
        if self.phase is Phase.NON_CONDENSED:
            if self.A != 0.0:
                raise ValueError("La fase no condensada requiere A = 0")
            return self
        if self.point.c > 0 and not self.A > 0:
            raise ValueError("La fase condensada requiere A > 0")
        if not 0.0 <= self.B < rho:
            raise ValueError("La fase condensada requiere 0 ≤ B < ρ")
        if not 0.0 < self.condensate_density <= rho:
            raise ValueError("La densidad del condensado debe estar en (0, ρ]")
        return self

    @property
    def gap(self) -> float:
        """e_g(0) = 4c√((ρ−B)A) en la fase condensada."""
        if self.phase is Phase.NON_CONDENSED:
            return 4.0 * self.point.c * self.point.rho - self.mu
        return 4.0 * self.point.c * math.sqrt((self.point.rho - self.B) * self.A)


class BogolyubovParams(APIBaseModel):
    """Parámetros de la transformación de Bogoliubov sobre la malla de k.

    Attributes:
        k: Momentos de la malla
        tanh_2sigma: tanh 2σ_k
        nu: Ocupaciones térmicas ν_k
    """

    k: FloatArray
    tanh_2sigma: FloatArray
    nu: FloatArray

    @model_validator(mode="after")
    def validate_canonical(self) -> BogolyubovParams:
        """|tanh 2σ_k| < 1 y ν_k ≥ 0."""
        if np.any(np.abs(self.tanh_2sigma) >= 1.0):
            raise ValueError("|tanh 2σ_k| debe ser < 1 (canonicidad)")
        if np.any(self.nu < 0):
            raise ValueError("Las ocupaciones ν_k deben ser no negativas")
        return self

    @property
    def cosh_2sigma(self) -> np.ndarray:
        return 1.0 / np.sqrt(1.0 - self.tanh_2sigma**2)

    @property
    def sinh_2sigma(self) -> np.ndarray:
        return self.tanh_2sigma * self.cosh_2sigma


class SpectrumSample(APIBaseModel):
    """Energía de excitación gaussiana e_g(k)."""

    k: float
    energy: float = Field(ge=0)


# -----------------------------------Bogoliubov Models-----------------------------------#


class BogoliubovResult(APIBaseModel):
    """Resultados perturbativos en forma cerrada.

    Attributes:
        gamma: Acoplamiento
        rho: Densidad
        e: E/N / ρ²
        mu: μ/ρ²
        vs_compressibility: v_s/ρ por compresibilidad (NaN si el radicando es negativo)
        vs_spectrum: v_s/ρ por pendiente del espectro, 2√γ
    """

    gamma: float = Field(ge=0)
    rho: float = Field(default=1.0, gt=0)
    e: float
    mu: float
    vs_compressibility: float
    vs_spectrum: float

    @model_validator(mode="after")
    def validate_velocities(self) -> BogoliubovResult:
        """La velocidad espectral acota por arriba a la de compresibilidad."""
        if math.isfinite(self.vs_compressibility) and (
            self.vs_spectrum < self.vs_compressibility - 1e-12
        ):
            raise ValueError("vs_spectrum debe ser ≥ vs_compressibility")
        return self

    def spectrum(self, p: float | np.ndarray) -> float | np.ndarray:
        """ε(p) = √(p⁴ + 4cρp²) con c = γρ."""
        from ravexbose.bogoliubov import bogoliubov_dispersion

        return bogoliubov_dispersion(p, self.gamma, self.rho)
