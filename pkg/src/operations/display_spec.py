"""Tests for display formatting utilities."""
import io

from rich.console import Console
from rich.table import Table

from conftest import make_coupling, make_field, make_manifest, make_mode
from coupling.survey import material_comparison
from operations.display import (
    STAGE_STATUS_PRESENTATION,
    display_field_sweeps,
    display_manifest,
    display_material_table,
    print_coupling,
    print_field,
    print_mode,
    print_transmission,
)
from operations.models import EstimateSource, StageStatus, TransmissionOutcome
from physics.models import ResonatorSpec
from spectroscopy.field_sweep import FieldSweepResult


def _rendered(draw, *args) -> str:
    buffer = io.StringIO()
    draw(Console(file=buffer, width=160, color_system=None), *args)
    return buffer.getvalue()


def should_present_every_stage_status():
    assert set(STAGE_STATUS_PRESENTATION) == set(StageStatus)


def should_print_manifest_table_with_correct_columns(mocker):
    console = mocker.Mock(spec=Console)

    display_manifest(console, make_manifest(StageStatus.OK))

    console.print.assert_called_once()
    table = console.print.call_args[0][0]
    assert isinstance(table, Table)
    assert [col.header for col in table.columns] == ["Stage", "Status", "Mode", "Wall (s)", "Notes"]


def should_add_one_row_per_stage(mocker):
    console = mocker.Mock(spec=Console)

    display_manifest(console, make_manifest(StageStatus.CACHED, StageStatus.FAILED, StageStatus.SKIPPED))

    table = console.print.call_args[0][0]
    assert table.row_count == 3


def should_show_the_target_in_the_manifest_title(mocker):
    console = mocker.Mock(spec=Console)

    display_manifest(console, make_manifest(StageStatus.OK, StageStatus.OK))

    assert "spectrum" in console.print.call_args[0][0].title


def should_show_frequency_sources_and_warnings():
    mode = make_mode().model_copy(update={"warnings": ["linewidth from the damping formula"]})

    text = _rendered(print_mode, mode)

    assert "1.2550 GHz" in text
    assert "reference" in text
    assert "linewidth from the damping formula" in text


def should_show_the_coupling_regime():
    text = _rendered(print_coupling, make_coupling(g_hz=2e6, delta_f_G=3.3e6))

    assert "2.000 MHz" in text
    assert "strong" in text


def should_show_the_splitting_against_twice_g():
    outcome = TransmissionOutcome(
        g_hz=2e6,
        fg_slope_hz_per_t=-3e9,
        slope_source=EstimateSource.ANALYTIC,
        resonant_field_t=0.0,
        resonant_peaks_hz=[1.253e9, 1.257e9],
        decoupling_field_t=6.7e-3,
    )

    text = _rendered(print_transmission, outcome)

    assert "4.000 MHz (2g = 4.000 MHz)" in text
    assert "6.700 mT" in text


def should_note_a_missing_splitting():
    outcome = TransmissionOutcome(
        g_hz=0.0,
        fg_slope_hz_per_t=-3e9,
        slope_source=EstimateSource.CONFIG,
        resonant_field_t=0.0,
        resonant_peaks_hz=[1.255e9],
    )

    text = _rendered(print_transmission, outcome)

    assert "Splitting" not in text
    assert "1.255000" in text


def should_show_the_disc_centre_field():
    text = _rendered(print_field, make_field(bx=4e-9))

    assert "4.0000e-09 T" in text


def should_tabulate_both_polarities(mocker):
    console = mocker.Mock(spec=Console)
    sweeps = [
        FieldSweepResult(
            polarity=p, points=[(0.0, 1.25e9), (0.05, 1.25e9 + p * 1e8)], slope=p * 2e9, intercept=1.25e9,
            max_residual_fraction=0.001,
        )
        for p in (1, -1)
    ]

    display_field_sweeps(console, sweeps)

    table = console.print.call_args[0][0]
    assert table.row_count == 2


def should_tabulate_one_row_per_material(mocker):
    console = mocker.Mock(spec=Console)
    table = material_comparison(["Py", "CoFe"], base=ResonatorSpec(f_cpw=1e9, kappa=1e5, w=1e-6))

    display_material_table(console, table)

    rendered = console.print.call_args[0][0]
    assert rendered.row_count == 2
    assert "4g/2πΔf_G" in [col.header for col in rendered.columns]
