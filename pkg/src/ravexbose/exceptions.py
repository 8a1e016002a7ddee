"""Excepciones personalizadas para los solvers del gas de Bose 1D."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ravexbose.models import SolverReport


class BoseGasException(Exception):
    """Excepción base para errores de los solvers numéricos.

    Attributes:
        message: Descripción del error ocurrido

    Example:
        >>> try:
        ...     e = ground_energy(1e6)
        ... except BoseGasException as e:
        ...     print(f"Error: {e}")
    """

    def __init__(self, message: str) -> None:
        """Inicializa la excepción con un mensaje de error.

        Args:
            message: Descripción del error que se debe reportar
        """
        self.message = message
        super().__init__(self.message)


class SolverException(BoseGasException):
    """Fallo numérico genérico (cuadratura, sistema lineal, iteración)."""

    pass


class SingularSystemException(SolverException):
    """El sistema de Nyström (I − K) es singular o numéricamente singular."""

    pass


class ConvergenceException(SolverException):
    """Una iteración no alcanzó la tolerancia pedida.

    Attributes:
        report: Último reporte del solver (iteraciones, residuo)

    Example:
        >>> try:
        ...     solve_condensed(point)
        ... except ConvergenceException as e:
        ...     print(e.report.residual)
    """

    def __init__(self, message: str, report: SolverReport | None = None) -> None:
        self.report = report
        super().__init__(message)


class BracketingException(SolverException):
    """No hay cambio de signo en el intervalo, o la expansión del intervalo falló."""

    pass


class CouplingRangeException(BoseGasException):
    """El acoplamiento γ está fuera del rango soportado [1e-4, 1e5].

    Fuera de ese rango no se sustituyen fórmulas asintóticas: se falla.
    """

    pass


class BranchDomainException(BoseGasException):
    """El parámetro q no pertenece al dominio de la rama de excitación."""

    pass


class PhaseException(BoseGasException):
    """Fase gaussiana inválida o no soportada (A ≤ 0, fase no condensada a T=0)."""

    pass


class OutputException(BoseGasException):
    """Error de E/S al escribir tablas.

    Attributes:
        path: Ruta que no se pudo escribir
    """

    def __init__(self, message: str, path: str) -> None:
        self.path = path
        super().__init__(f"{message}: {path}")
