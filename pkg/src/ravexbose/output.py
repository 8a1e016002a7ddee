"""Tablas de salida: CSV con metadatos en comentarios '#' y JSON equivalente."""

import csv
import io
import logging
import math
import sys
from pathlib import Path

from pydantic import Field, model_validator

from ravexbose.exceptions import OutputException
from ravexbose.models import APIBaseModel

logger = logging.getLogger(__name__)

Cell = float | str


class FigureDataset(APIBaseModel):
    """Tabla lista para graficar.

    Las celdas fallidas son NaN ("nan" en CSV, null en JSON).

    Attributes:
        figure: Figura que reproduce (1–4), o None
        columns: Nombres de columna
        rows: Filas de celdas (float o etiqueta)
        abscissa: Columna por la que las filas están ordenadas
        group: Columna de etiqueta dentro de la cual rige el orden
        metadata: Procedencia (comando, versión, tolerancias)
    """

    figure: int | None = Field(default=None, ge=1, le=4)
    columns: list[str] = Field(min_length=1)
    rows: list[list[Cell]]
    abscissa: str
    group: str | None = None
    metadata: dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_table(self) -> "FigureDataset":
        """Filas del ancho del esquema, ordenadas por la abscisa dentro de cada grupo."""
        width = len(self.columns)
        if any(len(row) != width for row in self.rows):
            raise ValueError("Todas las filas deben tener una celda por columna")
        if self.abscissa not in self.columns:
            raise ValueError(f"La abscisa '{self.abscissa}' no es una columna")
        if self.group is not None and self.group not in self.columns:
            raise ValueError(f"El grupo '{self.group}' no es una columna")

        x = self.columns.index(self.abscissa)
        g = self.columns.index(self.group) if self.group is not None else None
        last: dict[Cell | None, float] = {}
        for row in self.rows:
            value = row[x]
            if isinstance(value, str) or math.isnan(value):
                continue
            key = row[g] if g is not None else None
            if key in last and value < last[key]:
                raise ValueError(f"Filas no ordenadas por '{self.abscissa}'")
            last[key] = value
        return self

    def column(self, name: str) -> list[Cell]:
        """Valores de una columna."""
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_csv(self) -> str:
        """CSV con encabezado de comentarios ``# clave: valor``."""
        buffer = io.StringIO()
        buffer.write("# ravexbose figure data\n")
        header = {"figure": self.figure, "abscissa": self.abscissa, "group": self.group}
        for key, value in header.items():
            if value is not None:
                buffer.write(f"# {key}: {value}\n")
        for key in sorted(self.metadata):
            buffer.write(f"# {key}: {self.metadata[key]}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([repr(float(c)) if not isinstance(c, str) else c for c in row])
        return buffer.getvalue()

    def to_json(self) -> str:
        """JSON indentado; NaN se emite como null."""
        return self.model_dump_json(indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        return self.to_csv()


def _parse_cell(text: str) -> Cell:
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(text: str) -> FigureDataset:
    """Inversa de ``FigureDataset.to_csv``."""
    header: dict[str, str] = {}
    data_lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition(": ")
            if sep:
                header[key] = value
            continue
        data_lines.append(line)

    rows = list(csv.reader(data_lines))
    if not rows:
        raise ValueError("El CSV no tiene fila de encabezado")
    if "abscissa" not in header:
        raise ValueError("El CSV no declara la abscisa en su encabezado")
    figure = header.pop("figure", None)
    return FigureDataset(
        figure=int(figure) if figure is not None else None,
        abscissa=header.pop("abscissa"),
        group=header.pop("group", None),
        columns=rows[0],
        rows=[[_parse_cell(cell) for cell in row] for row in rows[1:]],
        metadata=header,
    )


def failed_columns(dataset: FigureDataset) -> list[str]:
    """Columnas numéricas (sin contar abscisa ni grupo) con todas sus celdas NaN."""
    failed = []
    for name in dataset.columns:
        if name in (dataset.abscissa, dataset.group):
            continue
        values = dataset.column(name)
        if values and all(isinstance(v, float) and math.isnan(v) for v in values):
            failed.append(name)
    return failed


def write_dataset(dataset: FigureDataset, path: Path | None, fmt: str = "csv") -> None:
    """Escribe la tabla en ``path`` o en stdout.

    Raises:
        OutputException: Si la escritura falla.
    """
    text = dataset.render(fmt)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise OutputException(
            f"No se pudo escribir la tabla ({e.strerror})", str(path)
        ) from e
    logger.info("Tabla escrita en %s", path)
