"""Configuración de pytest y fixtures compartidos."""

import argparse

import pytest

from ravexbose import CouplingPoint, solve_condensed
from ravexbose.constants import FIGURE_GAMMAS


@pytest.fixture
def unit_point():
    """Fixture con el punto γ=1, ρ=1, T=0."""
    return CouplingPoint.from_gamma(1.0)


@pytest.fixture(scope="session")
def gaussian_gamma1():
    """Fixture con la solución gaussiana convergida en γ=1, T=0."""
    return solve_condensed(CouplingPoint.from_gamma(1.0))


@pytest.fixture(scope="session")
def gaussian_figure_gammas():
    """Fixture con las soluciones gaussianas en los γ de las figuras 3 y 4."""
    return {
        figure: solve_condensed(CouplingPoint.from_gamma(gamma))
        for figure, gamma in FIGURE_GAMMAS.items()
    }


@pytest.fixture
def config_file(tmp_path):
    """Fixture que escribe un archivo de configuración key=value."""

    def write(text: str):
        path = tmp_path / "run.cfg"
        path.write_text(text, encoding="utf-8")
        return path

    return write


@pytest.fixture
def empty_args():
    """Fixture con un Namespace de argparse sin flags dados."""
    return argparse.Namespace(
        config=None,
        rho=None,
        gamma=None,
        gamma_min=None,
        gamma_max=None,
        points=None,
        log=None,
        temperature=None,
        nodes=None,
        tol=None,
        format=None,
        out=None,
        workers=None,
        methods=None,
        branches=None,
        q_points=None,
    )
