"""Configuración de ejecución: valores por defecto < archivo key=value < flags."""

import argparse
import logging
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import ConfigDict, Field, field_validator, model_validator

from ravexbose.constants import (
    DEFAULT_NODES,
    DEFAULT_Q_POINTS,
    FIGURE_GAMMA_MAX,
    FIGURE_GAMMA_MIN,
    FIGURE_POINTS,
    FIXED_POINT_TOL,
    MIN_Q_POINTS,
)
from ravexbose.models import APIBaseModel, BranchType, Method

logger = logging.getLogger(__name__)

# Nombres alternativos aceptados en el archivo de configuración
KEY_ALIASES = {"temp": "temperature"}


class RunConfig(APIBaseModel):
    """Parámetros de una corrida de la CLI.

    Sin γ ni rango se usa la malla de las figuras: 40 puntos logarítmicos
    en [0.05, 20].

    Attributes:
        rho: Densidad ρ
        gamma: γ único (excluyente con el rango)
        gamma_min: Extremo inferior del rango de γ
        gamma_max: Extremo superior del rango de γ
        points: Puntos del rango
        log: Espaciado logarítmico del rango
        temperature: Temperatura T
        nodes: Nodos de cuadratura
        tol: Tolerancia del punto fijo gaussiano
        format: Formato de salida
        out: Ruta de salida (stdout si es None)
        workers: Concurrencia de los barridos
        methods: Métodos a calcular
        branches: Ramas de excitación a calcular
        q_points: Muestras por rama
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    rho: float = Field(default=1.0, gt=0)
    gamma: float | None = Field(default=None, gt=0)
    gamma_min: float | None = Field(default=None, gt=0)
    gamma_max: float | None = Field(default=None, gt=0)
    points: int = Field(default=FIGURE_POINTS, ge=1)
    log: bool = False
    temperature: float = Field(default=0.0, ge=0)
    nodes: int = Field(default=DEFAULT_NODES, ge=16)
    tol: float = Field(default=FIXED_POINT_TOL, gt=0)
    format: Literal["csv", "json"] = "csv"
    out: Path | None = None
    workers: int = Field(default=1, ge=1)
    methods: frozenset[Method] = frozenset(Method)
    branches: frozenset[BranchType] = frozenset(BranchType)
    q_points: int = Field(default=DEFAULT_Q_POINTS, ge=MIN_Q_POINTS)

    @field_validator("methods", "branches", mode="before")
    @classmethod
    def split_list(cls, v: Any) -> Any:
        """Acepta listas separadas por comas."""
        if isinstance(v, str):
            items = [item.strip() for item in v.split(",") if item.strip()]
            if not items:
                raise ValueError("La lista no puede estar vacía")
            return items
        return v

    @model_validator(mode="after")
    def validate_gamma_selection(self) -> "RunConfig":
        """γ único y rango son excluyentes; el rango debe ser creciente."""
        has_range = self.gamma_min is not None or self.gamma_max is not None
        if self.gamma is not None and has_range:
            raise ValueError("Use --gamma o --gamma-min/--gamma-max, no ambos")
        if has_range:
            if self.gamma_min is None or self.gamma_max is None:
                raise ValueError("El rango requiere --gamma-min y --gamma-max")
            if not self.gamma_min < self.gamma_max:
                raise ValueError("Se requiere gamma_min < gamma_max")
        if not self.methods:
            raise ValueError("Se requiere al menos un método")
        return self

    def gamma_grid(self) -> list[float]:
        """Malla de γ seleccionada, estrictamente creciente."""
        if self.gamma is not None:
            return [self.gamma]
        if self.gamma_min is None or self.gamma_max is None:
            return np.geomspace(FIGURE_GAMMA_MIN, FIGURE_GAMMA_MAX, FIGURE_POINTS).tolist()
        if self.points == 1:
            return [self.gamma_min]
        spacing = np.geomspace if self.log else np.linspace
        return spacing(self.gamma_min, self.gamma_max, self.points).tolist()

    def ordered_methods(self) -> list[Method]:
        """Métodos seleccionados en el orden de las columnas."""
        return [m for m in Method if m in self.methods]

    def ordered_branches(self) -> list[BranchType]:
        return [b for b in BranchType if b in self.branches]


CONFIG_KEYS = frozenset(RunConfig.model_fields)


def _normalize_key(key: str) -> str:
    key = key.strip().lower().replace("-", "_")
    return KEY_ALIASES.get(key, key)


def load_config(path: str | Path) -> dict[str, str]:
    """Lee un archivo de líneas ``key=value``.

    Las líneas vacías y las que empiezan con ``#`` se ignoran. Las claves
    usan los nombres largos de los flags, con ``-`` o ``_``.

    Raises:
        ValueError: Si el archivo no se puede leer, una línea no tiene ``=``
            o una clave es desconocida.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ValueError(f"No se pudo leer la configuración {path}: {e}") from e

    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: se esperaba key=value")
        key, value = line.split("=", 1)
        key = _normalize_key(key)
        if key not in CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: clave desconocida '{key}'")
        values[key] = value.strip()
    logger.debug("Configuración leída de %s: %s", path, sorted(values))
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    """Combina defaults, archivo ``--config`` y flags (en ese orden de precedencia)."""
    values: dict[str, Any] = {}
    config_path = getattr(args, "config", None)
    if config_path is not None:
        values.update(load_config(config_path))
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return RunConfig(**values)
