"""Ejecución concurrente de barridos de parámetros.

Cada punto de un barrido es independiente. ``SweepRunner`` los evalúa en
hilos con ``asyncio.to_thread`` (NumPy/LAPACK liberan el GIL) y devuelve
los resultados en el orden de entrada, con los fallos capturados por punto.
"""

import asyncio
import logging
from collections.abc import Callable, Sequence

from ravexbose.exceptions import BoseGasException
from ravexbose.models import APIBaseModel

logger = logging.getLogger(__name__)

# Errores que se registran por punto en lugar de abortar el barrido
POINT_ERRORS = (BoseGasException, ValueError, ArithmeticError)


class PointResult(APIBaseModel):
    """Resultado de un punto del barrido.

    Attributes:
        index: Posición del punto en la entrada
        value: Valores calculados, o None si el punto falló
        error: Mensaje de error si el punto falló
    """

    index: int
    value: tuple[float, ...] | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


class SweepRunner:
    """Evaluador de barridos con concurrencia acotada.

    Attributes:
        workers: Número máximo de puntos evaluándose a la vez

    Example:
        >>> runner = SweepRunner(workers=4)
        >>> results = runner.run_sync(lambda g: (g**2,), [0.1, 1.0, 10.0])
        >>> [r.value for r in results]
        [(0.010000000000000002,), (1.0,), (100.0,)]
    """

    def __init__(self, workers: int = 1):
        """Inicializa el evaluador.

        Args:
            workers: Concurrencia máxima (≥ 1). Por defecto 1 (secuencial).
        """
        if workers < 1:
            raise ValueError("workers debe ser ≥ 1")
        self.workers = workers

    async def run(
        self,
        fn: Callable[[float], tuple[float, ...]],
        points: Sequence[float],
    ) -> list[PointResult]:
        """Evalúa ``fn`` en todos los puntos.

        Args:
            fn: Función de un punto que retorna una tupla de floats.
            points: Puntos a evaluar.

        Returns:
            Lista de PointResult en el mismo orden que ``points``.
        """
        semaphore = asyncio.Semaphore(self.workers)

        async def evaluate(index: int, point: float) -> PointResult:
            async with semaphore:
                try:
                    value = await asyncio.to_thread(fn, point)
                except POINT_ERRORS as e:
                    logger.warning("Punto %r falló: %s", point, e)
                    return PointResult(index=index, error=str(e))
            return PointResult(index=index, value=tuple(float(v) for v in value))

        results = await asyncio.gather(
            *(evaluate(i, p) for i, p in enumerate(points))
        )
        logger.info(
            "Barrido de %d puntos: %d fallidos",
            len(results),
            sum(not r.ok for r in results),
        )
        return sorted(results, key=lambda r: r.index)

    def run_sync(
        self,
        fn: Callable[[float], tuple[float, ...]],
        points: Sequence[float],
    ) -> list[PointResult]:
        """Versión síncrona de ``run``."""
        return asyncio.run(self.run(fn, points))
