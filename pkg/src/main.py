"""vortex-cavity CLI entry point.

This module defines the Typer application and all CLI commands.
Command logic is kept thin; all business logic lives in operations/.
"""

import logging
import sys
from pathlib import Path
from typing import Annotated

import typer
from pydantic import BaseModel
from rich.console import Console

from constants import (
    EXIT_IO_ERROR,
    EXIT_OK,
    EXIT_VALIDATION_ERROR,
    FILESYSTEM_IO_ERRORS,
    NUMERICAL_ERRORS,
    VALIDATION_ERRORS,
    exit_code_for,
)
from coupling.survey import material_comparison
from operations.adapters import FilesystemArtifactWriter, FilesystemStageCache
from operations.config import ExperimentConfig, load_config
from operations.display import (
    display_field_sweeps,
    display_manifest,
    display_material_table,
    print_coupling,
    print_field,
    print_mode,
    print_relax,
    print_transmission,
)
from operations.models import (
    CouplingOutcome,
    FieldOutcome,
    ModeEstimate,
    RelaxOutcome,
    StageName,
    TransmissionOutcome,
)
from operations.pipeline import PipelineRun, run_pipeline
from operations.plots import field_sweep_script
from operations.stages import analytic_mode
from spectroscopy.field_sweep import field_sweep_fG
from utils.fs import atomic_write_text

logging.basicConfig(level=logging.WARNING)

if sys.version_info < (3, 13):  # pragma: no cover - defensive
    raise RuntimeError("Requires Python 3.13+")

ConfigPath = Annotated[Path | None, typer.Option(
    "--config", exists=True, dir_okay=False, readable=True, help="INI experiment configuration"
)]
OutDir = Annotated[Path, typer.Option("--out", file_okay=False, help="Run directory for outputs and the manifest")]
Overrides = Annotated[list[str] | None, typer.Option(
    "--override", help="section.key=value applied before validation (repeatable)"
)]
Threads = Annotated[int | None, typer.Option("--threads", min=1, help="Worker threads for FFTs and sweeps")]
Quick = Annotated[bool, typer.Option("--quick", help="Short spectroscopy traces: f_G only, linewidth from damping")]

DEFAULT_OUT = Path("vortex-run")

app = typer.Typer(help="Single-photon coupling of a CPW resonator to a magnetic vortex.")
console = Console()


@app.callback()
def _configure_logging(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging"),
) -> None:
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


def _load_config_or_exit(
    config: Path | None, overrides: list[str] | None, threads: int | None, quick: bool
) -> ExperimentConfig:
    """Read and validate the configuration, exiting cleanly before any compute on failure."""
    try:
        return load_config(config, overrides, threads=threads, quick=quick)
    except FILESYSTEM_IO_ERRORS as e:
        console.print(f"[red]Failed to read configuration {config}: {e}[/red]")
        raise typer.Exit(EXIT_IO_ERROR)
    except VALIDATION_ERRORS as e:
        console.print(f"[red]Invalid configuration: {e}[/red]")
        raise typer.Exit(EXIT_VALIDATION_ERROR)


def _run_or_exit(config: ExperimentConfig, target: StageName, out: Path) -> PipelineRun:
    """Run the pipeline up to ``target``; a failed stage ends the command with its exit code."""
    try:
        run = run_pipeline(config, target, FilesystemArtifactWriter(out), FilesystemStageCache(out))
    except FILESYSTEM_IO_ERRORS as e:
        console.print(f"[red]Failed to write run directory {out}: {e}[/red]")
        raise typer.Exit(EXIT_IO_ERROR)
    except VALIDATION_ERRORS as e:
        console.print(f"[red]{e}[/red]")
        raise typer.Exit(EXIT_VALIDATION_ERROR)

    display_manifest(console, run.manifest)
    if run.exit_code != EXIT_OK:
        failed = next(record for record in run.manifest.stages if record.error)
        console.print(f"[red]✗ Stage {failed.name} failed: {failed.error}[/red]")
        raise typer.Exit(run.exit_code)
    console.print(f"[dim]Outputs in {out}[/dim]")
    return run


def _payload[P: BaseModel](
    run: PipelineRun, stage: StageName, payload_type: type[P]
) -> P:
    payload = run.payload(stage, payload_type)
    assert payload is not None
    return payload


@app.command()
def relax(
    config: ConfigPath = None,
    out: OutDir = DEFAULT_OUT,
    override: Overrides = None,
    threads: Threads = None,
    quick: Quick = False,
) -> None:
    """Relax the vortex ground state and write an OVF snapshot."""
    settings = _load_config_or_exit(config, override, threads, quick)
    run = _run_or_exit(settings, StageName.RELAX, out)
    print_relax(console, _payload(run, StageName.RELAX, RelaxOutcome))


@app.command()
def spectrum(
    config: ConfigPath = None,
    out: OutDir = DEFAULT_OUT,
    override: Overrides = None,
    threads: Threads = None,
    quick: Quick = False,
) -> None:
    """Gyrotropic frequency and linewidth from a sinc-pulse spectrum."""
    settings = _load_config_or_exit(config, override, threads, quick)
    run = _run_or_exit(settings, StageName.SPECTRUM, out)
    print_mode(console, _payload(run, StageName.SPECTRUM, ModeEstimate))


@app.command("sweep-field")
def sweep_field(
    config: ConfigPath = None,
    out: OutDir = DEFAULT_OUT,
    override: Overrides = None,
    threads: Threads = None,
    quick: Quick = False,
) -> None:
    """f_G against the out-of-plane bias field for both core polarities."""
    settings = _load_config_or_exit(config, override, threads, quick)
    try:
        sweeps = [
            field_sweep_fG(
                settings.geometry(),
                settings.material_params(),
                settings.spectroscopy.field_sweep_t,
                polarity,
                settings=settings.sweep_settings(),
                n_jobs=settings.numerics.threads,
            )
            for polarity in (1, -1)
        ]
    except (*VALIDATION_ERRORS, *NUMERICAL_ERRORS) as e:
        console.print(f"[red]Field sweep failed: {type(e).__name__}: {e}[/red]")
        raise typer.Exit(exit_code_for(e))

    csv = sweeps[0].to_csv() + "".join(s.to_csv().split("\n", 1)[1] for s in sweeps[1:])
    try:
        atomic_write_text(out / "field_sweep.csv", csv)
        atomic_write_text(out / "plot_field_sweep.py", field_sweep_script("field_sweep.csv"))
    except FILESYSTEM_IO_ERRORS as e:
        console.print(f"[red]Failed to write field sweep to {out}: {e}[/red]")
        raise typer.Exit(EXIT_IO_ERROR)
    display_field_sweeps(console, sweeps)


@app.command()
def rmsfield(
    config: ConfigPath = None,
    out: OutDir = DEFAULT_OUT,
    override: Overrides = None,
    threads: Threads = None,
    quick: Quick = False,
) -> None:
    """Single-photon field of the constriction: field map, disc-centre value and u_w(r) fit."""
    settings = _load_config_or_exit(config, override, threads, quick)
    run = _run_or_exit(settings, StageName.FIELD, out)
    print_field(console, _payload(run, StageName.FIELD, FieldOutcome))


@app.command()
def couple(
    config: ConfigPath = None,
    out: OutDir = DEFAULT_OUT,
    override: Overrides = None,
    threads: Threads = None,
    quick: Quick = False,
) -> None:
    """Coupling strength, strong-coupling ratio and the width sweep."""
    settings = _load_config_or_exit(config, override, threads, quick)
    run = _run_or_exit(settings, StageName.COUPLING, out)
    print_coupling(console, _payload(run, StageName.COUPLING, CouplingOutcome))


@app.command()
def transmit(
    config: ConfigPath = None,
    out: OutDir = DEFAULT_OUT,
    override: Overrides = None,
    threads: Threads = None,
    quick: Quick = False,
) -> None:
    """Cavity transmission over bias field and drive frequency."""
    settings = _load_config_or_exit(config, override, threads, quick)
    run = _run_or_exit(settings, StageName.TRANSMISSION, out)
    print_transmission(console, _payload(run, StageName.TRANSMISSION, TransmissionOutcome))


@app.command()
def pipeline(
    config: ConfigPath = None,
    out: OutDir = DEFAULT_OUT,
    override: Overrides = None,
    threads: Threads = None,
    quick: Quick = False,
) -> None:
    """Every stage from relaxation to transmission, reusing unchanged stages."""
    settings = _load_config_or_exit(config, override, threads, quick)
    run = _run_or_exit(settings, StageName.TRANSMISSION, out)
    print_coupling(console, _payload(run, StageName.COUPLING, CouplingOutcome))
    print_transmission(console, _payload(run, StageName.TRANSMISSION, TransmissionOutcome))


@app.command()
def materials(
    config: ConfigPath = None,
    out: OutDir = DEFAULT_OUT,
    override: Overrides = None,
    threads: Threads = None,
    quick: Quick = False,
) -> None:
    """Strong-coupling ratio of every material preset on the comparison disc."""
    settings = _load_config_or_exit(config, override, threads, quick)
    try:
        base = settings.resonator.to_spec(analytic_mode(settings).f_G)
        table = material_comparison(base=base, xi=settings.coupling.xi, layers=settings.resonator.filament_layers)
    except (*VALIDATION_ERRORS, *NUMERICAL_ERRORS) as e:
        console.print(f"[red]Material comparison failed: {type(e).__name__}: {e}[/red]")
        raise typer.Exit(exit_code_for(e))
    try:
        atomic_write_text(out / "materials.csv", table.to_csv())
    except FILESYSTEM_IO_ERRORS as e:
        console.print(f"[red]Failed to write material table to {out}: {e}[/red]")
        raise typer.Exit(EXIT_IO_ERROR)
    display_material_table(console, table)


def main() -> None:
    app()


if __name__ == "__main__":  # pragma: no cover
    main()
