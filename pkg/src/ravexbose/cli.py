"""Línea de comandos: barridos, tablas de las figuras y diagnósticos gaussianos."""

import argparse
import logging
import math
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from ravexbose import __version__
from ravexbose.bogoliubov import bogoliubov_dispersion, perturbative
from ravexbose.config import RunConfig, build_config
from ravexbose.constants import (
    FIGURE_GAMMA_MAX,
    FIGURE_GAMMA_MIN,
    FIGURE_GAMMAS,
    FIGURE_POINTS,
)
from ravexbose.exact_excitations import branch
from ravexbose.exact_ground import compressibility_sound, ground_energy, sound_velocity
from ravexbose.exceptions import BoseGasException, OutputException
from ravexbose.gaussian import (
    gap_residual,
    gaussian_energy_curve,
    solution_dispersion,
    solve_condensed,
)
from ravexbose.models import CouplingPoint, GaussianSolution, Method
from ravexbose.output import FigureDataset, failed_columns, write_dataset
from ravexbose.sweeps import SweepRunner

logger = logging.getLogger(__name__)

PointFn = Callable[[float], tuple[float, ...]]


def _metadata(config: RunConfig) -> dict[str, str]:
    return {
        "nodes": str(config.nodes),
        "rho": repr(config.rho),
        "temperature": repr(config.temperature),
        "tol": repr(config.tol),
    }


def _sweep(
    config: RunConfig, fn: PointFn, grid: Sequence[float], width: int
) -> list[tuple[float, ...]]:
    """Evalúa ``fn`` en la malla; los puntos fallidos quedan como NaN."""
    results = SweepRunner(config.workers).run_sync(fn, list(grid))
    return [r.value if r.value is not None else (math.nan,) * width for r in results]


def _gaussian_point(config: RunConfig, gamma: float) -> GaussianSolution:
    point = CouplingPoint.from_gamma(gamma, config.rho, config.temperature)
    return solve_condensed(point, config.nodes, config.tol)


def _assemble(
    config: RunConfig,
    grid: list[float],
    blocks: list[tuple[list[str], PointFn]],
    figure: int | None,
) -> FigureDataset:
    columns = ["gamma"]
    cells: list[list[tuple[float, ...]]] = []
    for names, fn in blocks:
        columns.extend(names)
        cells.append(_sweep(config, fn, grid, len(names)))
    rows = [
        [gamma, *(v for block in cells for v in block[i])]
        for i, gamma in enumerate(grid)
    ]
    return FigureDataset(
        figure=figure,
        columns=columns,
        rows=rows,
        abscissa="gamma",
        metadata=_metadata(config),
    )


def cmd_ground(config: RunConfig) -> FigureDataset:
    """Tabla de e(γ): exacta, gaussiana y perturbativa."""
    rho2 = config.rho**2
    fns: dict[Method, PointFn] = {
        Method.EXACT: lambda g: (ground_energy(g, config.nodes),),
        Method.GAUSSIAN: lambda g: (
            _gaussian_point(config, g).energy_per_particle / rho2,
        ),
        Method.BOGOLIUBOV: lambda g: (perturbative(g, config.rho).e,),
    }
    blocks = [([f"e_{m}"], fns[m]) for m in config.ordered_methods()]
    return _assemble(config, config.gamma_grid(), blocks, figure=1)


def cmd_sound(config: RunConfig) -> FigureDataset:
    """Tabla de v_s(γ)/ρ: exacta, gaussiana y las dos perturbativas."""
    energy = gaussian_energy_curve(
        config.rho, config.temperature, config.nodes, config.tol
    )

    def bogoliubov_row(g: float) -> tuple[float, float]:
        result = perturbative(g, config.rho)
        return result.vs_compressibility, result.vs_spectrum

    blocks: dict[Method, tuple[list[str], PointFn]] = {
        Method.EXACT: (["vs_exact"], lambda g: (sound_velocity(g, config.nodes),)),
        Method.GAUSSIAN: (
            ["vs_gaussian"],
            lambda g: (compressibility_sound(energy, g),),
        ),
        Method.BOGOLIUBOV: (["vs_bogo_compress", "vs_bogo_spectrum"], bogoliubov_row),
    }
    return _assemble(
        config,
        config.gamma_grid(),
        [blocks[m] for m in config.ordered_methods()],
        figure=2,
    )


def cmd_excitations(config: RunConfig) -> FigureDataset:
    """Ramas exactas con los espectros gaussiano y perturbativo en los mismos p.

    Raises:
        ValueError: Si no se dio un γ único.
    """
    gamma = config.gamma
    if gamma is None:
        raise ValueError("excitations requiere --gamma")

    gaussian: GaussianSolution | None = None
    if Method.GAUSSIAN in config.methods:
        try:
            gaussian = _gaussian_point(config, gamma)
        except BoseGasException as e:
            logger.warning("Espectro gaussiano no disponible en γ=%r: %s", gamma, e)

    columns = ["branch", "q", "p", "epsilon_exact"]
    if Method.GAUSSIAN in config.methods:
        columns.append("epsilon_gaussian")
    if Method.BOGOLIUBOV in config.methods:
        columns.append("epsilon_bogoliubov")

    rows: list[list[float | str]] = []
    for branch_type in config.ordered_branches():
        data = branch(
            gamma,
            branch_type,
            n_q=config.q_points,
            rho=config.rho,
            n_nodes=config.nodes,
            workers=config.workers,
        )
        for sample in data.points:
            row: list[float | str] = [
                branch_type.value,
                sample.q,
                sample.p,
                sample.epsilon,
            ]
            if Method.GAUSSIAN in config.methods:
                row.append(
                    float(solution_dispersion(gaussian, sample.p))
                    if gaussian is not None
                    else math.nan
                )
            if Method.BOGOLIUBOV in config.methods:
                row.append(float(bogoliubov_dispersion(sample.p, gamma, config.rho)))
            rows.append(row)

    figure = next((f for f, g in FIGURE_GAMMAS.items() if g == gamma), None)
    return FigureDataset(
        figure=figure,
        columns=columns,
        rows=rows,
        abscissa="p",
        group="branch",
        metadata={**_metadata(config), "gamma": repr(gamma)},
    )


def cmd_gaussian_detail(config: RunConfig) -> FigureDataset:
    """Volcado de A, B, C, condensado, μ, gap, e y residuo reintegrado con malla doble."""
    names = ["A", "B", "C", "condensate_density", "mu", "gap", "e", "residual"]

    def row(g: float) -> tuple[float, ...]:
        s = _gaussian_point(config, g)
        residual = gap_residual(s.point, s.A, s.B, 2 * config.nodes) if s.A > 0 else 0.0
        return (
            s.A,
            s.B,
            s.C,
            s.condensate_density,
            s.mu,
            s.gap,
            s.energy_per_particle / config.rho**2,
            residual,
        )

    return _assemble(config, config.gamma_grid(), [(names, row)], figure=None)


def cmd_figures(
    which: Sequence[int], outdir: Path, config: RunConfig
) -> list[tuple[Path, FigureDataset]]:
    """Calcula las tablas de las figuras con su ruta de salida en ``outdir``.

    Raises:
        OutputException: Si ``outdir`` no se puede crear o escribir.
    """
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputException(
            f"No se pudo crear el directorio ({e.strerror})", str(outdir)
        ) from e

    sweep = config.model_copy(
        update={
            "gamma": None,
            "gamma_min": FIGURE_GAMMA_MIN,
            "gamma_max": FIGURE_GAMMA_MAX,
            "points": FIGURE_POINTS,
            "log": True,
        }
    )
    written = []
    for figure in sorted(set(which)):
        if figure == 1:
            dataset = cmd_ground(sweep)
        elif figure == 2:
            dataset = cmd_sound(sweep)
        elif figure in FIGURE_GAMMAS:
            single = config.model_copy(
                update={
                    "gamma": FIGURE_GAMMAS[figure],
                    "gamma_min": None,
                    "gamma_max": None,
                }
            )
            dataset = cmd_excitations(single)
        else:
            raise ValueError(f"Figura desconocida: {figure}")
        path = outdir / f"fig{figure}.{config.format}"
        written.append((path, dataset))
    return written


def _figure_list(text: str) -> list[int]:
    try:
        figures = [int(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Lista de figuras inválida: {text}") from e
    if not figures or any(f not in (1, 2, 3, 4) for f in figures):
        raise argparse.ArgumentTypeError("Las figuras deben estar en 1,2,3,4")
    return figures


def build_parser() -> argparse.ArgumentParser:
    # Flags de cada subcomando; default=None para que build_config distinga los dados
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--rho", type=float, default=None, help="Densidad ρ (default: 1)."
    )
    common.add_argument("--gamma", type=float, default=None, help="γ único.")
    common.add_argument(
        "--gamma-min",
        type=float,
        default=None,
        dest="gamma_min",
        help="Extremo inferior del rango de γ.",
    )
    common.add_argument(
        "--gamma-max",
        type=float,
        default=None,
        dest="gamma_max",
        help="Extremo superior del rango de γ.",
    )
    common.add_argument(
        "--points", type=int, default=None, help="Puntos del rango (default: 40)."
    )
    common.add_argument(
        "--log",
        action="store_true",
        default=None,
        help="Espaciado logarítmico del rango.",
    )
    common.add_argument(
        "--temp",
        type=float,
        default=None,
        dest="temperature",
        help="Temperatura T (default: 0).",
    )
    common.add_argument(
        "--nodes", type=int, default=None, help="Nodos de cuadratura (default: 128)."
    )
    common.add_argument(
        "--tol", type=float, default=None, help="Tolerancia del punto fijo gaussiano."
    )
    common.add_argument(
        "--format", choices=["csv", "json"], default=None, help="Formato de salida."
    )
    common.add_argument(
        "--out", type=Path, default=None, help="Archivo de salida (default: stdout)."
    )
    common.add_argument(
        "--config", type=Path, default=None, help="Archivo key=value de configuración."
    )
    common.add_argument(
        "--workers", type=int, default=None, help="Puntos evaluados en paralelo."
    )
    common.add_argument(
        "--methods", default=None, help="Subconjunto de exact,gaussian,bogoliubov."
    )
    common.add_argument("--branches", default=None, help="Subconjunto de I,II.")
    common.add_argument(
        "--q-points",
        type=int,
        default=None,
        dest="q_points",
        help="Muestras por rama.",
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v INFO, -vv DEBUG."
    )

    parser = argparse.ArgumentParser(
        prog="ravexbose",
        description="Gas de Bose 1D: solución exacta, campo medio gaussiano y Bogoliubov.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(
        "ground", parents=[common], help="Energía del estado fundamental (figura 1)."
    )
    sub.add_parser("sound", parents=[common], help="Velocidad del sonido (figura 2).")
    sub.add_parser(
        "excitations", parents=[common], help="Ramas de excitación (figuras 3 y 4)."
    )
    sub.add_parser(
        "gaussian-detail",
        parents=[common],
        help="Diagnóstico de la solución gaussiana.",
    )
    figures = sub.add_parser("figures", parents=[common], help="Regenera fig1..fig4.")
    figures.add_argument(
        "--which",
        type=_figure_list,
        default=[1, 2, 3, 4],
        help="Figuras, p. ej. 1,3.",
    )
    figures.add_argument(
        "--outdir", type=Path, default=Path("."), help="Directorio de salida."
    )
    return parser


COMMANDS: dict[str, Callable[[RunConfig], FigureDataset]] = {
    "ground": cmd_ground,
    "sound": cmd_sound,
    "excitations": cmd_excitations,
    "gaussian-detail": cmd_gaussian_detail,
}


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Punto de entrada de la CLI.

    Returns:
        0 si todo se calculó, 1 si algún método falló en todos los puntos
        o hubo un error irrecuperable, 2 si la configuración es inválida.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    try:
        config = build_config(args)
    except ValueError as e:
        logger.error("Configuración inválida: %s", e)
        return 2

    provenance = {"command": " ".join(["ravexbose", *argv]), "version": __version__}
    try:
        if args.command == "figures":
            outputs: list[tuple[Path | None, FigureDataset]] = list(
                cmd_figures(args.which, args.outdir, config)
            )
        else:
            outputs = [(config.out, COMMANDS[args.command](config))]
        exit_code = 0
        for path, dataset in outputs:
            dataset = dataset.model_copy(
                update={"metadata": {**dataset.metadata, **provenance}}
            )
            write_dataset(dataset, path, config.format)
            failed = failed_columns(dataset)
            if failed:
                logger.error("Columnas sin ningún punto válido: %s", ", ".join(failed))
                exit_code = 1
        return exit_code
    except (BoseGasException, ValueError) as e:
        logger.error("%s", e)
        return 1
