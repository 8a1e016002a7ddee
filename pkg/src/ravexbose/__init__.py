"""RaveXBose - Gas de Bose 1D con interacción delta repulsiva.

Este paquete calcula propiedades del estado fundamental y de las
excitaciones del gas de Lieb-Liniger de tres maneras: la solución exacta
(ecuaciones de Fredholm), el campo medio gaussiano autoconsistente y la
teoría de perturbaciones de Bogoliubov.

Example:
    >>> from ravexbose import ground_energy, perturbative, solve_condensed
    >>> from ravexbose import CouplingPoint
    >>>
    >>> exact = ground_energy(2.0)
    >>> gaussian = solve_condensed(CouplingPoint.from_gamma(2.0))
    >>> bogoliubov = perturbative(2.0)
    >>> bogoliubov.e < exact < gaussian.energy_per_particle
    True
"""

from ravexbose.bogoliubov import (
    bogoliubov_dispersion,
    perturbative,
    perturbative_curve,
    truncated_functional_check,
)
from ravexbose.config import RunConfig, build_config, load_config
from ravexbose.exact_excitations import (
    branch,
    endpoint_limit,
    phonon_slope,
    solve_type1,
    solve_type2,
)
from ravexbose.exact_ground import (
    chemical_potential,
    compressibility_mu,
    compressibility_sound,
    gamma_to_lambda,
    ground_energy,
    solve_at_gamma,
    solve_dimensionless,
    sound_velocity,
    sweep_ground,
)
from ravexbose.exceptions import (
    BoseGasException,
    BracketingException,
    BranchDomainException,
    ConvergenceException,
    CouplingRangeException,
    OutputException,
    PhaseException,
    SingularSystemException,
    SolverException,
)
from ravexbose.gaussian import (
    condensed_number_variance,
    free_energy,
    free_energy_functional,
    gap_residual,
    gaussian_energy,
    gaussian_spectrum,
    noncondensed_density,
    number_variance,
    solve_condensed,
    solve_noncondensed,
    sweep_gaussian,
)
from ravexbose.models import (
    BogoliubovResult,
    BogolyubovParams,
    BranchType,
    CouplingPoint,
    ExcitationBranch,
    GaussianSolution,
    LiebGroundSolution,
    Method,
    NystromSystem,
    Phase,
    QuadratureGrid,
    SolverReport,
    SpectrumSample,
    ThermoCurve,
)
from ravexbose.output import FigureDataset, read_csv
from ravexbose.sweeps import SweepRunner

__version__ = "0.1.0"

__all__ = [
    # Solución exacta
    "solve_dimensionless",
    "gamma_to_lambda",
    "solve_at_gamma",
    "ground_energy",
    "chemical_potential",
    "sound_velocity",
    "compressibility_mu",
    "compressibility_sound",
    "sweep_ground",
    "solve_type1",
    "solve_type2",
    "branch",
    "phonon_slope",
    "endpoint_limit",
    # Campo medio gaussiano
    "solve_condensed",
    "solve_noncondensed",
    "gap_residual",
    "gaussian_spectrum",
    "gaussian_energy",
    "free_energy",
    "free_energy_functional",
    "noncondensed_density",
    "number_variance",
    "condensed_number_variance",
    "sweep_gaussian",
    # Bogoliubov
    "perturbative",
    "bogoliubov_dispersion",
    "truncated_functional_check",
    "perturbative_curve",
    # Barridos, configuración y salida
    "SweepRunner",
    "RunConfig",
    "load_config",
    "build_config",
    "FigureDataset",
    "read_csv",
    # Excepciones
    "BoseGasException",
    "SolverException",
    "SingularSystemException",
    "ConvergenceException",
    "BracketingException",
    "CouplingRangeException",
    "BranchDomainException",
    "PhaseException",
    "OutputException",
    # Modelos
    "CouplingPoint",
    "QuadratureGrid",
    "NystromSystem",
    "SolverReport",
    "LiebGroundSolution",
    "ThermoCurve",
    "ExcitationBranch",
    "GaussianSolution",
    "BogolyubovParams",
    "SpectrumSample",
    "BogoliubovResult",
    "Method",
    "BranchType",
    "Phase",
]


def main() -> None:  # pragma: no cover
    """Punto de entrada del script ``ravexbose``."""
    from ravexbose.cli import main as cli_main

    raise SystemExit(cli_main())
