"""Tests para la línea de comandos."""

import json
import math

import numpy as np
import pytest

from ravexbose import __version__
from ravexbose.cli import build_parser, cmd_excitations, cmd_figures, main
from ravexbose.config import RunConfig
from ravexbose.exceptions import SolverException
from ravexbose.gaussian import solve_condensed
from ravexbose.models import BranchType, CouplingPoint
from ravexbose.output import read_csv


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


class TestParser:
    """Tests para build_parser."""

    def test_version(self, capsys):
        """Test de --version."""
        with pytest.raises(SystemExit) as exc_info:
            build_parser().parse_args(["--version"])

        assert exc_info.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_subcommand_required(self):
        """Test que se requiere un subcomando."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_unset_flags_are_none(self):
        """Test que los flags no dados quedan en None."""
        args = build_parser().parse_args(["ground", "--temp", "0.5"])

        assert args.temperature == 0.5
        assert args.gamma is None
        assert args.log is None

    def test_figure_list(self):
        """Test de --which."""
        args = build_parser().parse_args(["figures", "--which", "3,1"])
        assert args.which == [3, 1]

    def test_invalid_figure_list(self):
        """Test de figura fuera de 1–4."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["figures", "--which", "5"])


class TestGround:
    """Tests para el subcomando ground."""

    def test_single_gamma(self, capsys):
        """Test de una fila con los tres métodos en γ = 2."""
        code, captured = _run(capsys, "ground", "--gamma", "2")
        table = read_csv(captured.out)
        _, e_exact, e_gaussian, e_bogoliubov = table.rows[0]

        assert code == 0
        assert table.figure == 1
        assert table.columns == ["gamma", "e_exact", "e_gaussian", "e_bogoliubov"]
        assert e_bogoliubov <= e_exact <= e_gaussian
        assert table.metadata["command"] == "ravexbose ground --gamma 2"
        assert table.metadata["version"] == __version__

    def test_tonks_row(self, capsys):
        """Test de la fila γ = 1e4 con los tres métodos."""
        code, captured = _run(capsys, "ground", "--gamma", "1e4")
        _, e_exact, e_gaussian, e_bogoliubov = read_csv(captured.out).rows[0]

        assert code == 0
        assert e_exact == pytest.approx(math.pi**2 / 3.0, rel=2e-3)
        assert math.isfinite(e_gaussian)
        assert e_gaussian >= e_exact
        assert e_bogoliubov < -100.0

    def test_node_doubling_is_stable(self, capsys):
        """Test que --nodes 256 y --nodes 128 dan la misma tabla a 1e-8."""
        argv = ["ground", "--gamma-min", "0.5", "--gamma-max", "5", "--points", "3"]
        _, coarse = _run(capsys, *argv, "--nodes", "128")
        _, fine = _run(capsys, *argv, "--nodes", "256")

        np.testing.assert_allclose(
            np.array(read_csv(fine.out).rows),
            np.array(read_csv(coarse.out).rows),
            rtol=0,
            atol=1e-8,
        )

    def test_failed_point_is_null_in_json(self, capsys):
        """Test que un punto fallido se emite como null."""
        code, captured = _run(
            capsys,
            "ground",
            "--gamma-min", "1",
            "--gamma-max", "2e5",
            "--points", "2",
            "--methods", "exact,bogoliubov",
            "--format", "json",
        )
        rows = json.loads(captured.out)["rows"]

        assert code == 0
        assert rows[1][1] is None
        assert rows[1][2] is not None

    def test_all_points_failed(self, capsys, mocker):
        """Test de código de salida 1 si un método falla en todos los puntos."""
        mocker.patch("ravexbose.cli.ground_energy", side_effect=SolverException("residuo"))
        code, captured = _run(capsys, "ground", "--gamma", "1", "--methods", "exact")

        assert code == 1
        assert "nan" in captured.out

    def test_invalid_config(self, capsys, caplog):
        """Test de código de salida 2 con configuración inválida."""
        code, _ = _run(
            capsys, "ground", "--gamma", "1", "--gamma-min", "0.1", "--gamma-max", "2"
        )
        assert code == 2
        assert "Configuración inválida" in caplog.text

    def test_config_file(self, capsys, config_file):
        """Test de configuración tomada de archivo."""
        path = config_file("gamma = 0.5\nmethods = bogoliubov\n")
        code, captured = _run(capsys, "ground", "--config", str(path))

        assert code == 0
        expected = 0.5 - 4.0 * 0.5**1.5 / (3.0 * math.pi)
        assert read_csv(captured.out).rows == [[0.5, pytest.approx(expected)]]

    def test_output_file(self, capsys, tmp_path):
        """Test de escritura con --out."""
        path = tmp_path / "ground.csv"
        code, captured = _run(
            capsys, "ground", "--gamma", "1", "--methods", "bogoliubov", "--out", str(path)
        )

        assert code == 0
        assert captured.out == ""
        assert read_csv(path.read_text(encoding="utf-8")).rows[0][1] == pytest.approx(
            1.0 - 4.0 / (3.0 * math.pi)
        )

    def test_unwritable_output(self, capsys, caplog, tmp_path):
        """Test de error de escritura con su ruta."""
        path = tmp_path / "missing" / "ground.csv"
        code, _ = _run(
            capsys, "ground", "--gamma", "1", "--methods", "bogoliubov", "--out", str(path)
        )
        assert code == 1
        assert str(path) in caplog.text


class TestSound:
    """Tests para el subcomando sound."""

    def test_columns_and_spectrum_velocity(self, capsys):
        """Test de columnas y v_s = 2√γ exacta para el espectro."""
        code, captured = _run(
            capsys, "sound", "--gamma-min", "0.25", "--gamma-max", "1", "--points", "2"
        )
        table = read_csv(captured.out)

        assert code == 0
        assert table.figure == 2
        assert table.columns == [
            "gamma",
            "vs_exact",
            "vs_gaussian",
            "vs_bogo_compress",
            "vs_bogo_spectrum",
        ]
        assert table.column("vs_bogo_spectrum") == [1.0, 2.0]
        for _, vs_exact, vs_gaussian, vs_compress, _ in table.rows:
            assert vs_gaussian >= vs_exact
            assert abs(vs_exact - vs_compress) / vs_exact < 2e-2


class TestGaussianDetail:
    """Tests para el subcomando gaussian-detail."""

    def test_detail_columns(self, capsys):
        """Test de identidad del gap, condensado y residuo."""
        code, captured = _run(capsys, "gaussian-detail", "--gamma", "1")
        table = read_csv(captured.out)
        row = dict(zip(table.columns, table.rows[0], strict=True))

        assert code == 0
        assert table.figure is None
        assert row["gap"] == pytest.approx(
            4.0 * math.sqrt(row["condensate_density"] * row["A"]), rel=1e-12
        )
        assert row["condensate_density"] <= 1.0
        assert row["residual"] < 1e-10


class TestExcitations:
    """Tests para el subcomando excitations."""

    def test_requires_single_gamma(self, capsys, caplog):
        """Test que excitations exige --gamma."""
        code, _ = _run(capsys, "excitations", "--gamma-min", "1", "--gamma-max", "2")
        assert code == 1
        assert "--gamma" in caplog.text

    def test_table(self):
        """Test de la tabla de ramas en un γ libre."""
        config = RunConfig(gamma=1.0, q_points=8, branches="II")
        table = cmd_excitations(config)

        assert table.figure is None
        assert table.abscissa == "p"
        assert table.group == "branch"
        assert set(table.column("branch")) == {"II"}
        assert table.columns == [
            "branch",
            "q",
            "p",
            "epsilon_exact",
            "epsilon_gaussian",
            "epsilon_bogoliubov",
        ]

    def test_gaussian_unavailable(self, mocker):
        """Test que un fallo gaussiano deja su columna en NaN."""
        mocker.patch(
            "ravexbose.cli.solve_condensed", side_effect=SolverException("sin converger")
        )
        table = cmd_excitations(RunConfig(gamma=1.0, q_points=8, branches="I"))
        assert all(math.isnan(v) for v in table.column("epsilon_gaussian"))


class TestFigures:
    """Tests para el subcomando figures."""

    def test_figure_one_with_perturbative_column(self, capsys, tmp_path):
        """Test de fig1.csv sobre la malla de 40 puntos."""
        code, _ = _run(
            capsys,
            "figures",
            "--which", "1",
            "--outdir", str(tmp_path),
            "--methods", "bogoliubov",
        )
        table = read_csv((tmp_path / "fig1.csv").read_text(encoding="utf-8"))
        grid = table.column("gamma")

        assert code == 0
        assert len(grid) == 40
        assert grid[0] == pytest.approx(0.05)
        assert grid[-1] == pytest.approx(20.0)
        assert not (tmp_path / "fig2.csv").exists()

    def test_reruns_are_identical(self, capsys, tmp_path):
        """Test que dos corridas producen archivos idénticos."""
        argv = ["figures", "--which", "1", "--outdir", str(tmp_path), "--methods", "bogoliubov"]
        main(argv)
        first = (tmp_path / "fig1.csv").read_bytes()
        main(argv)
        capsys.readouterr()

        assert (tmp_path / "fig1.csv").read_bytes() == first

    def test_presets_ignore_configured_gamma(self, mocker, tmp_path):
        """Test que la figura 3 usa γ = 0.787094 y la 1 la malla de figuras."""
        spy = mocker.patch("ravexbose.cli.cmd_excitations", wraps=cmd_excitations)
        config = RunConfig(gamma=5.0, q_points=8, methods="bogoliubov", branches="I")
        written = cmd_figures([3], tmp_path, config)

        assert [path.name for path, _ in written] == ["fig3.csv"]
        assert spy.call_args.args[0].gamma == 0.787094
        assert written[0][1].figure == 3


@pytest.mark.integration
class TestFigureData:
    """Contenido físico de las tablas de las figuras 3 y 4."""

    @pytest.mark.parametrize("figure", [3, 4])
    def test_excitation_figures(self, tmp_path, figure):
        """Test de gap gaussiano, ramas sin gap y desacuerdo con la rama II."""
        config = RunConfig(workers=4)
        [(_, table)] = cmd_figures([figure], tmp_path, config)
        rows = table.rows
        gamma = 0.787094 if figure == 3 else 3.07725
        gap = solve_condensed(CouplingPoint.from_gamma(gamma)).gap

        first = {b: next(r for r in rows if r[0] == b) for b in ("I", "II")}
        for row in first.values():
            _, _, p, e_exact, e_gauss, e_bogo = row
            assert p < 1e-2
            assert e_exact < 5e-2
            assert e_gauss == pytest.approx(gap, rel=1e-2)
            assert e_bogo < 5e-2

        hole = np.array([r[2:] for r in rows if r[0] == BranchType.TYPE_II.value])
        _, e_exact, e_gauss, e_bogo = hole.T
        assert np.nanmax(np.abs(e_gauss - e_exact) / e_exact) > 0.1
        assert np.nanmax(np.abs(e_bogo - e_exact) / e_exact) > 0.1

    def test_sound_bounds_on_figure_grid(self, tmp_path):
        """Test de v_gauss ≥ v_exact y acuerdo perturbativo para γ ≤ 1."""
        config = RunConfig(workers=4)
        [(_, table)] = cmd_figures([2], tmp_path, config)

        for gamma, vs_exact, vs_gaussian, vs_compress, _ in table.rows:
            assert vs_gaussian >= vs_exact - 1e-6
            if gamma <= 1.0:
                assert abs(vs_exact - vs_compress) / vs_exact < 2e-2
