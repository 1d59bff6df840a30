"""Display formatting utilities: accept a Console and domain models, produce Rich output."""

from pydantic import BaseModel
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from coupling.survey import MaterialTable
from operations.models import (
    CouplingOutcome,
    FieldOutcome,
    ModeEstimate,
    RelaxOutcome,
    RunManifest,
    StageStatus,
    TransmissionOutcome,
)
from physics.models import PHYSICAL
from spectroscopy.field_sweep import FieldSweepResult


class StageStatusPresentation(BaseModel, frozen=True):
    label: str
    style: str


STAGE_STATUS_PRESENTATION: dict[StageStatus, StageStatusPresentation] = {
    StageStatus.OK: StageStatusPresentation(label="✓ ok", style="green"),
    StageStatus.CACHED: StageStatusPresentation(label="= cached", style="cyan"),
    StageStatus.FAILED: StageStatusPresentation(label="✗ failed", style="red"),
    StageStatus.SKIPPED: StageStatusPresentation(label="- skipped", style="dim"),
}


def display_manifest(console: Console, manifest: RunManifest) -> None:
    """Render one row per stage with its status, variant, wall time and first warning or error."""
    table = Table(title=f"vortex-cavity: {manifest.target}")
    table.add_column("Stage", style="bold")
    table.add_column("Status")
    table.add_column("Mode", style="dim")
    table.add_column("Wall (s)", justify="right")
    table.add_column("Notes")

    for record in manifest.stages:
        presentation = STAGE_STATUS_PRESENTATION[record.status]
        notes = record.error or "; ".join(record.warnings)
        table.add_row(
            record.name.value,
            f"[{presentation.style}]{presentation.label}[/{presentation.style}]",
            record.mode.value if record.mode else "",
            f"{record.wall_seconds:.2f}",
            notes,
        )

    console.print(table)


def print_relax(console: Console, outcome: RelaxOutcome) -> None:
    console.print(
        Panel.fit(
            f"[bold]C[/] = {outcome.circulation:+d}  [bold]P[/] = {outcome.polarity:+d}\n"
            f"[dim]Core radius[/]: {outcome.core_radius_m * 1e9:.2f} nm\n"
            f"[dim]Steps[/]: {outcome.steps}  [dim]Residual torque[/]: {outcome.residual_torque:.2e}",
            title="vortex-cavity: relax",
            border_style="green",
        )
    )


def print_mode(console: Console, mode: ModeEstimate) -> None:
    uncertainty = f" ± {mode.f_G_uncertainty * 1e-6:.2f} MHz" if mode.f_G_uncertainty else ""
    lines = [
        f"[bold]f_G[/]: {mode.f_G * 1e-9:.4f} GHz{uncertainty} ({mode.frequency_source.value})",
        f"[bold]Δf_G[/]: {mode.delta_f_G * 1e-6:.3f} MHz ({mode.linewidth_source.value})",
    ]
    lines += [f"[yellow]⚠ {warning}[/yellow]" for warning in mode.warnings]
    console.print(Panel.fit("\n".join(lines), title="vortex-cavity: spectrum", border_style="cyan"))


def print_coupling(console: Console, outcome: CouplingOutcome) -> None:
    exact, approx = outcome.exact, outcome.approx
    style = "green" if exact.strong_ratio > 1 else "yellow"
    lines = [
        f"[bold]g/2π[/]: {exact.g_hz * 1e-6:.3f} MHz  [dim](closed form {approx.g_hz * 1e-6:.3f} MHz)[/dim]",
        f"[bold]4g/2πΔf_G[/]: [{style}]{exact.strong_ratio:.2f} ({exact.regime.value})[/{style}]",
        f"[dim]ΔM_x per quantum[/]: {outcome.response_amplitude_a_per_m:.3e} A/m",
    ]
    lines += [f"[yellow]⚠ {warning}[/yellow]" for warning in approx.warnings]
    console.print(Panel.fit("\n".join(lines), title="vortex-cavity: couple", border_style=style))


def print_transmission(console: Console, outcome: TransmissionOutcome) -> None:
    peaks = ", ".join(f"{f * 1e-9:.6f}" for f in outcome.resonant_peaks_hz) or "none"
    resonant = "n/a" if outcome.resonant_field_t is None else f"{outcome.resonant_field_t * 1e3:.3f} mT"
    lines = [
        f"[bold]Resonant B_dc[/]: {resonant}",
        f"[bold]Peaks[/]: {peaks} GHz",
    ]
    if outcome.splitting_hz is not None:
        splitting, two_g = outcome.splitting_hz * 1e-6, 2 * outcome.g_hz * 1e-6
        lines.append(f"[bold]Splitting[/]: {splitting:.3f} MHz (2g = {two_g:.3f} MHz)")
    if outcome.decoupling_field_t is not None:
        lines.append(f"[dim]Decoupled beyond[/]: {outcome.decoupling_field_t * 1e3:.3f} mT")
    console.print(Panel.fit("\n".join(lines), title="vortex-cavity: transmit", border_style="magenta"))


def display_field_sweeps(console: Console, sweeps: list[FieldSweepResult]) -> None:
    table = Table(title="vortex-cavity: sweep-field")
    table.add_column("P", justify="right")
    table.add_column("Points", justify="right")
    table.add_column("df_G/dB (GHz/T)", justify="right")
    table.add_column("f_G(0) (GHz)", justify="right")
    table.add_column("Max residual", justify="right")
    for sweep in sweeps:
        table.add_row(
            f"{sweep.polarity:+d}",
            str(len(sweep.points)),
            f"{sweep.slope * 1e-9:.3f}",
            f"{sweep.intercept * 1e-9:.4f}",
            f"{sweep.max_residual_fraction:.2%}",
        )
    console.print(table)


def display_material_table(console: Console, materials: MaterialTable) -> None:
    table = Table(
        title=f"vortex-cavity: materials (r = {materials.disc.r * 1e9:.0f} nm, "
        f"t = {materials.disc.t * 1e9:.0f} nm, w = {materials.w * 1e9:.0f} nm)"
    )
    table.add_column("Material", style="bold")
    table.add_column("μ0Ms (T)", justify="right")
    table.add_column("α", justify="right")
    table.add_column("l_ex (nm)", justify="right")
    table.add_column("f_G (GHz)", justify="right")
    table.add_column("Δf_G (MHz)", justify="right")
    table.add_column("4g/2πΔf_G", justify="right")
    for row in materials.rows:
        m = row.material
        table.add_row(
            m.name,
            f"{PHYSICAL.mu0 * m.Ms:.2f}",
            f"{m.alpha_llg:.1e}",
            f"{m.exchange_length * 1e9:.2f}",
            f"{row.f_G * 1e-9:.3f}",
            f"{row.delta_f_G * 1e-6:.2f}",
            f"{row.coupling.strong_ratio:.2f}",
        )
    console.print(table)


def print_field(console: Console, outcome: FieldOutcome) -> None:
    center = outcome.center
    lines = [
        f"[bold]b_x[/]: {center.bx:.4e} T  [dim]b_y[/]: {center.by:.2e} T",
        f"[dim]i_rms[/]: {center.current:.4e} A at f_cpw = {outcome.f_cpw * 1e-9:.4f} GHz",
    ]
    if outcome.uw is not None:
        uw = outcome.uw
        lines.append(f"[dim]u_w fit[/]: a1 = {uw.a1:.4f}, a2 = {uw.a2:.4e}, α = {uw.alpha:.4f}")
    lines += [f"[yellow]⚠ {warning}[/yellow]" for warning in outcome.warnings]
    console.print(Panel.fit("\n".join(lines), title="vortex-cavity: rmsfield", border_style="blue"))
