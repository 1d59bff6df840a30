import pytest

from conftest import make_config, make_coupling, make_field, make_mode
from operations.models import (
    CouplingOutcome,
    EstimateSource,
    FieldOutcome,
    ModeEstimate,
    StageName,
    SusceptibilityEstimate,
    TransmissionOutcome,
)
from operations.stages import (
    analytic_mode,
    run_coupling,
    run_field,
    run_spectrum,
    run_susceptibility,
    run_transmission,
    upstream_payload,
)
from cpw.field import disc_center_field
from micromag.grid import box_grid, uniform_state
from physics.errors import DomainError, VortexLostError
from physics.materials import material_preset
from spectroscopy.field_sweep import FieldSweepResult
from spectroscopy.susceptibility import analytic_susceptibility


def _written(writer) -> list[str]:
    calls = writer.write_text.call_args_list + writer.write_script.call_args_list
    return sorted(call.args[1] for call in calls)


class DescribeAnalyticMode:

    def should_use_the_tabulated_cofe_reference_disc(self):
        mode = analytic_mode(make_config())

        assert mode.f_G == pytest.approx(1.255e9)
        assert mode.delta_f_G == pytest.approx(3.3e6)
        assert mode.frequency_source is EstimateSource.REFERENCE
        assert mode.linewidth_source is EstimateSource.REFERENCE

    def should_scale_a_reference_disc_by_magnetization(self):
        mode = analytic_mode(make_config("material.preset=Py"))

        ratio = material_preset("Py").Ms / material_preset("CoFe").Ms
        assert mode.f_G == pytest.approx(1.255e9 * ratio)
        assert mode.frequency_source is EstimateSource.REFERENCE
        assert mode.linewidth_source is EstimateSource.ANALYTIC

    def should_fall_back_to_the_thin_disc_formula_off_the_table(self):
        mode = analytic_mode(make_config("disc.radius_m=300e-9", "disc.thickness_m=20e-9"))

        assert mode.frequency_source is EstimateSource.ANALYTIC
        assert mode.f_G > 0


def should_refuse_a_missing_upstream_payload():
    with pytest.raises(DomainError, match="ModeEstimate"):
        upstream_payload({}, StageName.SPECTRUM, ModeEstimate)


class DescribeAnalyticStages:

    def should_write_only_the_mode_without_micromagnetics(self, analytic_config, mock_writer):
        result = run_spectrum(analytic_config, mock_writer, {})

        assert isinstance(result.payload, ModeEstimate)
        assert result.mode is EstimateSource.REFERENCE
        assert result.outputs == {"mode.txt": "sha-spectrum-mode.txt"}
        mock_writer.read_ovf.assert_not_called()

    def should_use_the_closed_form_susceptibility(self, analytic_config, mock_writer):
        result = run_susceptibility(analytic_config, mock_writer, {StageName.SPECTRUM: make_mode()})

        chi = result.payload
        assert isinstance(chi, SusceptibilityEstimate)
        expected = analytic_susceptibility(material_preset("CoFe").Ms, analytic_config.coupling.xi, 3.3e6)
        assert chi.chi_x == pytest.approx(expected)
        assert chi.source is EstimateSource.ANALYTIC
        assert _written(mock_writer) == ["susceptibility.txt"]

    def should_tune_the_resonator_onto_the_gyrotropic_frequency(self, analytic_config, mock_writer):
        result = run_field(analytic_config, mock_writer, {StageName.SPECTRUM: make_mode()})

        field = result.payload
        assert isinstance(field, FieldOutcome)
        assert field.f_cpw == pytest.approx(1.255e9)
        assert field.kappa == pytest.approx(1.255e9 / 1e4)
        assert field.center.bx != 0
        assert {"field_map.csv", "disc_center.txt"} <= set(result.outputs)

    def should_reach_strong_coupling_for_the_reference_disc(self, analytic_config, mock_writer):
        upstream = {
            StageName.SPECTRUM: make_mode(),
            StageName.SUSCEPTIBILITY: run_susceptibility(
                analytic_config, mock_writer, {StageName.SPECTRUM: make_mode()}
            ).payload,
            StageName.FIELD: run_field(analytic_config, mock_writer, {StageName.SPECTRUM: make_mode()}).payload,
        }

        result = run_coupling(analytic_config, mock_writer, upstream)

        coupling = result.payload
        assert isinstance(coupling, CouplingOutcome)
        assert coupling.exact.strong_ratio > 1
        assert 0.5 < coupling.exact.g_angular / coupling.approx.g_angular < 2.0
        assert result.mode is EstimateSource.ANALYTIC
        assert {"coupling.txt", "width_sweep.csv", "reference_map.csv", "plot_reference_map.py"} <= set(
            result.outputs
        )


class DescribeRunTransmission:

    @pytest.fixture
    def upstream(self):
        return {
            StageName.SPECTRUM: make_mode(),
            StageName.COUPLING: make_coupling(g_hz=2e6),
            StageName.FIELD: make_field(),
        }

    def should_split_the_resonance_symmetrically(self, analytic_config, mock_writer, upstream):
        outcome = run_transmission(analytic_config, mock_writer, upstream).payload

        assert isinstance(outcome, TransmissionOutcome)
        assert outcome.resonant_field_t == pytest.approx(0.0)
        low, high = outcome.resonant_peaks_hz
        assert (low + high) / 2 == pytest.approx(1.255e9, abs=1e5)
        assert 0 < outcome.splitting_hz < 2 * outcome.g_hz
        assert outcome.slope_source is EstimateSource.ANALYTIC

    def should_write_the_map_and_a_rabi_trace(self, analytic_config, mock_writer, upstream):
        run_transmission(analytic_config, mock_writer, upstream)

        assert _written(mock_writer) == [
            "plot_rabi.py",
            "plot_transmission.py",
            "rabi.csv",
            "transmission.csv",
            "transmission.txt",
        ]

    def should_leave_a_single_resonator_peak_without_coupling(self, mock_writer, upstream):
        config = make_config("transmission.force_zero_coupling=true")

        outcome = run_transmission(config, mock_writer, upstream).payload

        assert outcome.g_hz == 0
        assert outcome.resonant_peaks_hz == [pytest.approx(1.255e9, abs=1e5)]
        assert outcome.decoupling_field_t is None
        assert "rabi.csv" not in _written(mock_writer)

    def should_write_identical_bare_cavity_columns_without_coupling(self, mock_writer, upstream):
        config = make_config("transmission.force_zero_coupling=true")
        run_transmission(config, mock_writer, upstream)

        csv = next(c.args[2] for c in mock_writer.write_text.call_args_list if c.args[1] == "transmission.csv")
        rows = [line.split(",") for line in csv.splitlines()[1:]]
        traces: dict[str, list[str]] = {}
        for b, _f, t in rows:
            traces.setdefault(b, []).append(t)
        assert len(traces) == config.transmission.b_dc_points
        assert len({tuple(trace) for trace in traces.values()}) == 1

    def should_use_a_configured_slope(self, mock_writer, upstream):
        config = make_config("transmission.fg_slope_hz_per_t=-2e9")

        outcome = run_transmission(config, mock_writer, upstream).payload

        assert outcome.fg_slope_hz_per_t == -2e9
        assert outcome.slope_source is EstimateSource.CONFIG

    def should_need_a_span_when_f_G_ignores_the_field(self, mock_writer, upstream):
        config = make_config("transmission.fg_slope_hz_per_t=0")

        with pytest.raises(DomainError, match="b_dc_span_t"):
            run_transmission(config, mock_writer, upstream)


def should_refuse_coupling_without_a_field_stage(analytic_config, mock_writer):
    with pytest.raises(DomainError):
        run_coupling(analytic_config, mock_writer, {StageName.SPECTRUM: make_mode()})


class DescribeDrivenSusceptibility:

    @pytest.fixture
    def snapshot(self, mock_writer, mocker):
        mocker.patch("operations.stages.FieldModel")
        grid = box_grid((8, 8, 2), (50e-9, 50e-9, 15e-9))
        mock_writer.read_ovf.return_value = (uniform_state(grid, (0.0, 0.0, 1.0), 1.9e6), grid)
        return grid

    @pytest.fixture
    def driven(self, mocker):
        return mocker.patch("operations.stages.resonant_susceptibility", return_value=1.0e13)

    def should_drive_with_the_resonator_field_map(self, mock_writer, snapshot, driven):
        config = make_config("stages.micromag=true")

        result = run_susceptibility(config, mock_writer, {StageName.SPECTRUM: make_mode()})

        kwargs = driven.call_args.kwargs
        centre = disc_center_field(config.resonator.to_spec(1.255e9), config.geometry())
        assert kwargs["b_profile"].shape == (*snapshot.shape, 3)
        assert kwargs["b_center"] == pytest.approx(centre.bx, rel=1e-12)
        assert result.payload.source is EstimateSource.MICROMAGNETIC

    def should_vary_the_drive_across_the_disc(self, mock_writer, snapshot, driven):
        run_susceptibility(make_config("stages.micromag=true"), mock_writer, {StageName.SPECTRUM: make_mode()})

        bx = driven.call_args.kwargs["b_profile"][..., 0]
        assert bx[:, 0, :].mean() > bx[:, -1, :].mean()
        assert bx[..., 0] == pytest.approx(bx[..., 1], rel=1e-12)

    def should_drive_uniformly_when_the_field_map_is_off(self, mock_writer, snapshot, driven):
        config = make_config("stages.micromag=true", "spectroscopy.cpw_drive=false")

        run_susceptibility(config, mock_writer, {StageName.SPECTRUM: make_mode()})

        assert driven.call_args.kwargs["b_profile"] is None
        assert driven.call_args.kwargs["b_center"] is None


class DescribeSweptSlope:

    @pytest.fixture
    def upstream(self):
        return {
            StageName.SPECTRUM: make_mode(),
            StageName.COUPLING: make_coupling(g_hz=2e6),
            StageName.FIELD: make_field(),
        }

    def should_fit_the_slope_to_the_bias_sweep(self, mock_writer, upstream, mocker):
        points = [(-0.05, 1.2e9), (0.05, 1.31e9)]
        sweep = FieldSweepResult(polarity=1, points=points, slope=1.1e9, intercept=1.255e9, max_residual_fraction=0.0)
        swept = mocker.patch("operations.stages.field_sweep_fG", return_value=sweep)
        config = make_config("stages.micromag=true", "numerics.threads=3")

        result = run_transmission(config, mock_writer, upstream)

        assert result.payload.fg_slope_hz_per_t == pytest.approx(1.1e9)
        assert result.payload.slope_source is EstimateSource.MICROMAGNETIC
        assert result.mode is EstimateSource.MICROMAGNETIC
        assert "field_sweep.csv" in _written(mock_writer)
        assert swept.call_args.args[2] == config.spectroscopy.field_sweep_t
        assert swept.call_args.kwargs["n_jobs"] == 3

    def should_fall_back_to_the_closed_form_when_the_vortex_is_lost(self, mock_writer, upstream, mocker):
        mocker.patch("operations.stages.field_sweep_fG", side_effect=VortexLostError("core reversed", 0.05))

        result = run_transmission(make_config("stages.micromag=true"), mock_writer, upstream)

        assert result.payload.slope_source is EstimateSource.ANALYTIC
        assert "lost the vortex" in result.warnings[0]
        assert "field_sweep.csv" not in _written(mock_writer)

    def should_skip_the_sweep_without_micromagnetics(self, analytic_config, mock_writer, upstream, mocker):
        swept = mocker.patch("operations.stages.field_sweep_fG")

        run_transmission(analytic_config, mock_writer, upstream)

        swept.assert_not_called()
