"""CLI integration tests."""

from pathlib import Path

from typer.testing import CliRunner

import main as cli
from physics.errors import ConvergenceError

runner = CliRunner()

ANALYTIC = ["--override", "stages.micromag=false", "--override", "transmission.f_points=201"]


def should_reject_a_malformed_override(tmp_path: Path) -> None:
    result = runner.invoke(cli.app, ["couple", "--out", str(tmp_path), "--override", "coupling.xi"])

    assert result.exit_code == 2
    assert "Invalid configuration" in result.output


def should_reject_an_out_of_range_value(tmp_path: Path) -> None:
    result = runner.invoke(cli.app, ["couple", "--out", str(tmp_path), "--override", "coupling.xi=2"])

    assert result.exit_code == 2


def should_reject_a_missing_config_file(tmp_path: Path) -> None:
    result = runner.invoke(cli.app, ["pipeline", "--config", str(tmp_path / "absent.ini")])

    assert result.exit_code == 2


def should_refuse_to_relax_without_micromagnetics(tmp_path: Path) -> None:
    result = runner.invoke(cli.app, ["relax", "--out", str(tmp_path), *ANALYTIC])

    assert result.exit_code == 2
    assert "micromag" in result.output


def should_run_the_closed_form_pipeline(tmp_path: Path) -> None:
    config = tmp_path / "run.ini"
    config.write_text("[disc]\nradius_m = 200e-9\nthickness_m = 30e-9\n")
    out = tmp_path / "run"

    result = runner.invoke(cli.app, ["pipeline", "--config", str(config), "--out", str(out), *ANALYTIC])

    assert result.exit_code == 0, result.output
    assert (out / "manifest.json").exists()
    assert (out / "config.ini").exists()
    assert (out / "stages" / "transmission" / "transmission.csv").exists()
    assert "strong" in result.output


def should_reuse_stages_on_a_second_run(tmp_path: Path) -> None:
    runner.invoke(cli.app, ["spectrum", "--out", str(tmp_path), *ANALYTIC])

    result = runner.invoke(cli.app, ["spectrum", "--out", str(tmp_path), *ANALYTIC])

    assert result.exit_code == 0
    assert "cached" in result.output


def should_exit_with_the_numerical_code_when_a_stage_fails(tmp_path: Path, mocker) -> None:
    mocker.patch("operations.stages.run_field", side_effect=ConvergenceError("did not settle", 1e-3))

    result = runner.invoke(cli.app, ["couple", "--out", str(tmp_path), *ANALYTIC])

    assert result.exit_code == 3
    assert "Stage field failed" in result.output


def should_write_the_material_table(tmp_path: Path) -> None:
    result = runner.invoke(cli.app, ["materials", "--out", str(tmp_path), *ANALYTIC])

    assert result.exit_code == 0, result.output
    table = (tmp_path / "materials.csv").read_text()
    assert table.startswith("material,")
    assert "\nNiMnSb," in table


def should_show_the_field_at_the_disc(tmp_path: Path) -> None:
    result = runner.invoke(cli.app, ["-v", "rmsfield", "--out", str(tmp_path), *ANALYTIC])

    assert result.exit_code == 0, result.output
    assert "rmsfield" in result.output
