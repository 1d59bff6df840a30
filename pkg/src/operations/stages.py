"""The six pipeline stages.

Each runner reads the resolved config and the payloads of the stages it depends
on, writes its files through the artifact writer and returns a StageResult.
With ``stages.micromag = false`` the spectrum and susceptibility stages use
closed forms and no stage needs a relaxed snapshot.
"""

import logging
from collections.abc import Mapping
from typing import TypeVar

import numpy as np
from pydantic import BaseModel

from cavity.dynamics import Excitation, rabi_dynamics
from cavity.system import TwoModeSystem
from cavity.transmission import peak_frequencies, transmission_map
from coupling.linewidth import linewidth_analytic
from coupling.strength import CouplingInputs, coupling_approx, coupling_exact, decoupling_field, response_amplitude
from coupling.survey import DiscMode, reference_modes, strong_coupling_map
from cpw.current import strip_current_distribution
from cpw.field import MapRegion, disc_center_field, field_at_points, field_map, field_on_cells, uw_at
from cpw.uw_fit import fit_uw
from micromag.diagnostics import VortexState, core_radius
from micromag.fields import FieldModel
from micromag.grid import MagGrid, build_disc_grid
from micromag.relax import relax
from operations.config import ExperimentConfig
from operations.models import (
    CouplingOutcome,
    EstimateSource,
    FieldOutcome,
    ModeEstimate,
    RelaxOutcome,
    StageName,
    StageResult,
    SusceptibilityEstimate,
    TransmissionOutcome,
)
from operations.plots import coupling_map_script, rabi_script, spectrum_script, transmission_script
from operations.ports import ArtifactWriterPort
from physics.circuit import frequency_from_thickness, i_rms, scaled_gyrotropic_frequency
from physics.errors import DomainError, FitError, VortexLostError
from physics.materials import DEFAULT_MATERIAL, material_preset, reference_disc
from physics.models import MaterialParams
from spectroscopy.broadband import broadband_spectrum, gyrotropic_peak
from spectroscopy.excitation import ExcitationKind, ExcitationSpec
from spectroscopy.field_sweep import GYROTROPIC_SEARCH_MAX_HZ, analytic_field_slope, field_sweep_fG
from spectroscopy.lorentzian import lorentzian_fit
from spectroscopy.susceptibility import analytic_susceptibility, resonant_susceptibility

logger = logging.getLogger(__name__)

SNAPSHOT_NAME = "relaxed.ovf"
# Half-width of the spectral window handed to the Lorentzian fit, relative to the peak.
FIT_WINDOW_FRACTION = 0.3
# Measured and closed-form susceptibility disagreeing by more than this factor is reported.
SUSCEPTIBILITY_AGREEMENT = 2.0
TRANSMISSION_B_SPAN_RATES = 8.0
TRANSMISSION_F_SPAN_RATES = 4.0
FIELD_MAP_POINTS = 61

Upstream = Mapping[StageName, BaseModel]
P = TypeVar("P", bound=BaseModel)


def upstream_payload(upstream: Upstream, stage: StageName, payload_type: type[P]) -> P:
    payload = upstream.get(stage)
    if not isinstance(payload, payload_type):
        raise DomainError(f"stage {stage} has not produced a {payload_type.__name__}")
    return payload


def _field_model(config: ExperimentConfig, grid: MagGrid, material: MaterialParams) -> FieldModel:
    n = config.numerics
    return FieldModel(grid, material, near_cells=n.demag_near_cells, workers=n.threads)


def run_relax(config: ExperimentConfig, writer: ArtifactWriterPort, upstream: Upstream) -> StageResult:
    geom, material = config.geometry(), config.material_params()
    grid = build_disc_grid(geom, material, config.numerics.cells)
    model = _field_model(config, grid, material)
    seed = VortexState(polarity=config.disc.polarity, circulation=config.disc.circulation)
    result = relax(grid, material, 0.0, seed, settings=config.relax_settings(), field_model=model)
    outcome = RelaxOutcome(
        polarity=result.state.polarity,
        circulation=result.state.circulation,
        core_position=result.state.core_position,
        core_radius_m=core_radius(result.magnetization, grid),
        steps=result.steps,
        residual_torque=result.residual_torque,
    )
    outputs = {
        SNAPSHOT_NAME: writer.write_ovf(StageName.RELAX, SNAPSHOT_NAME, result.magnetization, grid),
        "vortex_state.txt": writer.write_text(StageName.RELAX, "vortex_state.txt", outcome.to_text()),
    }
    return StageResult(payload=outcome, mode=EstimateSource.MICROMAGNETIC, outputs=outputs)


def analytic_mode(config: ExperimentConfig) -> ModeEstimate:
    """f_G from the reference discs scaled by Ms, else the thin-disc formula; Δf_G from the damping formula.

    The CoFe reference discs keep their tabulated linewidth.
    """
    geom, material = config.geometry(), config.material_params()
    reference = reference_disc(geom.r, geom.t)
    if reference is not None and material == material_preset(DEFAULT_MATERIAL):
        return ModeEstimate(
            f_G=reference.f_G,
            delta_f_G=reference.delta_f_G,
            frequency_source=EstimateSource.REFERENCE,
            linewidth_source=EstimateSource.REFERENCE,
        )
    if reference is not None:
        f_G = scaled_gyrotropic_frequency(reference.f_G, material_preset(DEFAULT_MATERIAL).Ms, material.Ms)
        frequency_source = EstimateSource.REFERENCE
    else:
        f_G = frequency_from_thickness(geom.r, geom.t, material.Ms)
        frequency_source = EstimateSource.ANALYTIC
    return ModeEstimate(
        f_G=f_G,
        delta_f_G=linewidth_analytic(material, geom.r, config.coupling.core_radius_m, f_G),
        frequency_source=frequency_source,
        linewidth_source=EstimateSource.ANALYTIC,
    )


def _micromagnetic_mode(
    config: ExperimentConfig, writer: ArtifactWriterPort, outputs: dict[str, str]
) -> ModeEstimate:
    material = config.material_params()
    mag, grid = writer.read_ovf(StageName.RELAX, SNAPSHOT_NAME, Ms=material.Ms)
    s = config.spectroscopy
    exc = ExcitationSpec(
        kind=ExcitationKind.SINC,
        amplitude=s.sinc_amplitude_t,
        duration=s.duration_s,
        sample_dt=s.sample_dt_s,
        f_cutoff=s.f_cutoff_hz,
        delay=s.sinc_delay_s,
    )
    model = _field_model(config, grid, material)
    spectrum = broadband_spectrum(
        mag,
        grid,
        material,
        exc,
        field_model=model,
        dt=config.numerics.dt_s,
        hann=s.hann_window,
        linearity_check=s.linearity_check,
    )
    outputs["spectrum.csv"] = writer.write_text(StageName.SPECTRUM, "spectrum.csv", spectrum.to_csv())
    outputs["plot_spectrum.py"] = writer.write_script(
        StageName.SPECTRUM, "plot_spectrum.py", spectrum_script("spectrum.csv")
    )

    peak = gyrotropic_peak(spectrum, f_max=GYROTROPIC_SEARCH_MAX_HZ)
    window = ((1 - FIT_WINDOW_FRACTION) * peak, (1 + FIT_WINDOW_FRACTION) * peak)
    report = lorentzian_fit(spectrum, window, require_linewidth=False)
    outputs["lorentzian_fit.txt"] = writer.write_text(StageName.SPECTRUM, "lorentzian_fit.txt", report.to_text())

    warnings = list(report.warnings)
    if report.delta_f_G is None:
        delta_f_G = linewidth_analytic(material, config.disc.radius_m, config.coupling.core_radius_m, report.f_G)
        warnings.append(f"linewidth from the damping formula: {report.linewidth_refused}")
        logger.warning("Spectrum refused a linewidth; using Δf_G = %.4e Hz from the damping formula", delta_f_G)
        linewidth_source = EstimateSource.ANALYTIC
    else:
        delta_f_G = report.delta_f_G
        linewidth_source = EstimateSource.MICROMAGNETIC
    return ModeEstimate(
        f_G=report.f_G,
        delta_f_G=delta_f_G,
        f_G_uncertainty=report.f_G_uncertainty,
        frequency_source=EstimateSource.MICROMAGNETIC,
        linewidth_source=linewidth_source,
        warnings=warnings,
    )


def run_spectrum(config: ExperimentConfig, writer: ArtifactWriterPort, upstream: Upstream) -> StageResult:
    outputs: dict[str, str] = {}
    if config.stages.micromag:
        mode = _micromagnetic_mode(config, writer, outputs)
    else:
        mode = analytic_mode(config)
    outputs["mode.txt"] = writer.write_text(StageName.SPECTRUM, "mode.txt", mode.to_text())
    logger.debug("f_G = %.6e Hz, Δf_G = %.4e Hz (%s)", mode.f_G, mode.delta_f_G, mode.frequency_source)
    return StageResult(payload=mode, mode=mode.frequency_source, outputs=outputs, warnings=mode.warnings)


def _cpw_drive(config: ExperimentConfig, grid: MagGrid, mode: ModeEstimate) -> tuple[np.ndarray, float]:
    """Single-photon field of the resonator on every cell of the snapshot grid, with its disc-centre b_x."""
    geom = config.geometry()
    spec = config.resonator.to_spec(mode.f_G)
    dist = strip_current_distribution(spec, i_rms(spec.f_cpw, spec.Z0), layers=config.resonator.filament_layers)
    x, y, _z = grid.cell_centers()
    x_offsets = x - (grid.origin[0] + grid.nx * grid.dx / 2)
    y_offsets = y - (grid.origin[1] + grid.ny * grid.dy / 2)
    profile = field_on_cells(dist, geom.center, x_offsets, y_offsets, grid.nz)
    b_center = float(field_at_points(dist, np.array([geom.center[:2]]))[0, 0])
    return profile, b_center


def run_susceptibility(config: ExperimentConfig, writer: ArtifactWriterPort, upstream: Upstream) -> StageResult:
    mode = upstream_payload(upstream, StageName.SPECTRUM, ModeEstimate)
    material = config.material_params()
    analytic = analytic_susceptibility(material.Ms, config.coupling.xi, mode.delta_f_G)
    warnings: list[str] = []
    if config.stages.micromag:
        mag, grid = writer.read_ovf(StageName.RELAX, SNAPSHOT_NAME, Ms=material.Ms)
        s = config.spectroscopy
        model = _field_model(config, grid, material)
        profile, b_center = _cpw_drive(config, grid, mode) if s.cpw_drive else (None, None)
        chi = resonant_susceptibility(
            mag,
            grid,
            material,
            mode.f_G,
            mode.delta_f_G,
            b_profile=profile,
            b_center=b_center,
            amplitude=s.drive_amplitude_t,
            tolerance=s.steady_tolerance,
            max_duration=s.max_drive_duration_s,
            field_model=model,
            dt=config.numerics.dt_s,
            sample_dt=s.sample_dt_s,
        )
        source = EstimateSource.MICROMAGNETIC
        ratio = chi / analytic
        if not 1 / SUSCEPTIBILITY_AGREEMENT <= ratio <= SUSCEPTIBILITY_AGREEMENT:
            message = f"driven χ_x is {ratio:.2f}× the closed form"
            logger.warning(message)
            warnings.append(message)
    else:
        chi, source = analytic, EstimateSource.ANALYTIC
    estimate = SusceptibilityEstimate(chi_x=chi, source=source, analytic_chi_x=analytic, warnings=warnings)
    outputs = {
        "susceptibility.txt": writer.write_text(StageName.SUSCEPTIBILITY, "susceptibility.txt", estimate.to_text())
    }
    return StageResult(payload=estimate, mode=source, outputs=outputs, warnings=warnings)


def run_field(config: ExperimentConfig, writer: ArtifactWriterPort, upstream: Upstream) -> StageResult:
    mode = upstream_payload(upstream, StageName.SPECTRUM, ModeEstimate)
    geom = config.geometry()
    spec = config.resonator.to_spec(mode.f_G)
    layers = config.resonator.filament_layers

    center = disc_center_field(spec, geom, layers=layers)
    dist = strip_current_distribution(spec, i_rms(spec.f_cpw, spec.Z0), layers=layers)
    region = MapRegion(
        x_min=-spec.w,
        x_max=spec.w,
        y_min=0.0,
        y_max=geom.standoff + 2 * geom.r,
        nx=FIELD_MAP_POINTS,
        ny=FIELD_MAP_POINTS,
    )
    outputs = {
        "field_map.csv": writer.write_text(StageName.FIELD, "field_map.csv", field_map(dist, region).to_csv()),
        "disc_center.txt": writer.write_text(StageName.FIELD, "disc_center.txt", center.to_text()),
    }

    warnings = list(center.warnings)
    uw = None
    try:
        uw = fit_uw(spec, config.coupling.radius_sweep_m, standoff=geom.standoff, layers=layers)
        outputs["uw_fit.txt"] = writer.write_text(StageName.FIELD, "uw_fit.txt", uw.to_text())
    except (FitError, DomainError) as e:
        message = f"u_w fit refused ({type(e).__name__}: {e}); the closed-form coupling uses u_w(r) directly"
        logger.warning(message)
        warnings.append(message)

    outcome = FieldOutcome(f_cpw=spec.f_cpw, kappa=spec.kappa, center=center, uw=uw, warnings=warnings)
    return StageResult(payload=outcome, mode=EstimateSource.ANALYTIC, outputs=outputs, warnings=warnings)


def run_coupling(config: ExperimentConfig, writer: ArtifactWriterPort, upstream: Upstream) -> StageResult:
    mode = upstream_payload(upstream, StageName.SPECTRUM, ModeEstimate)
    chi = upstream_payload(upstream, StageName.SUSCEPTIBILITY, SusceptibilityEstimate)
    field = upstream_payload(upstream, StageName.FIELD, FieldOutcome)
    geom, material = config.geometry(), config.material_params()
    c = config.coupling
    spec = config.resonator.to_spec(mode.f_G)
    layers = config.resonator.filament_layers

    inputs = CouplingInputs(
        b_rms_x_at_rc=abs(field.center.bx),
        V=geom.volume(c.volume_convention),
        chi_x=chi.chi_x,
        delta_f_G=mode.delta_f_G,
        f_G=mode.f_G,
    )
    exact = coupling_exact(inputs)
    uw = field.uw if field.uw is not None else uw_at(spec, geom.r, standoff=geom.standoff, layers=layers)
    approx = coupling_approx(c.xi, mode.f_G, spec.Z0, geom.r, uw, delta_f_G=mode.delta_f_G)
    outcome = CouplingOutcome(exact=exact, approx=approx, response_amplitude_a_per_m=response_amplitude(exact, inputs))

    disc_mode = DiscMode(geom=geom, f_G=mode.f_G, delta_f_G=mode.delta_f_G, chi_x=chi.chi_x)
    sweep = strong_coupling_map(
        [disc_mode], c.width_sweep_m, material, base=spec, xi=c.xi, volume_convention=c.volume_convention, layers=layers
    )
    reference = strong_coupling_map(
        reference_modes(),
        c.width_sweep_m,
        material_preset(DEFAULT_MATERIAL),
        base=spec,
        xi=c.xi,
        volume_convention=c.volume_convention,
        layers=layers,
    )
    outputs = {
        "coupling.txt": writer.write_text(StageName.COUPLING, "coupling.txt", outcome.to_text()),
        "width_sweep.csv": writer.write_text(StageName.COUPLING, "width_sweep.csv", sweep.to_csv()),
        "reference_map.csv": writer.write_text(StageName.COUPLING, "reference_map.csv", reference.to_csv()),
        "plot_reference_map.py": writer.write_script(
            StageName.COUPLING, "plot_reference_map.py", coupling_map_script("reference_map.csv")
        ),
    }
    logger.debug("g/2π = %.4e Hz, strong_ratio = %.3f", exact.g_hz, exact.strong_ratio)
    return StageResult(payload=outcome, mode=chi.source, outputs=outputs, warnings=list(approx.warnings))


def _fg_slope(
    config: ExperimentConfig,
    mode: ModeEstimate,
    writer: ArtifactWriterPort,
    outputs: dict[str, str],
    warnings: list[str],
) -> tuple[float, EstimateSource]:
    """df_G/dB_dc: configured, else a linear fit over the bias sweep, else the closed form."""
    configured = config.transmission.fg_slope_hz_per_t
    if configured is not None:
        return configured, EstimateSource.CONFIG
    material = config.material_params()
    if config.stages.micromag:
        try:
            sweep = field_sweep_fG(
                config.geometry(),
                material,
                config.spectroscopy.field_sweep_t,
                config.disc.polarity,
                settings=config.sweep_settings(),
                n_jobs=config.numerics.threads,
            )
        except VortexLostError as e:
            message = f"bias sweep lost the vortex at {e.b_dc:.4f} T; using the closed-form slope"
            logger.warning(message)
            warnings.append(message)
        else:
            outputs["field_sweep.csv"] = writer.write_text(StageName.TRANSMISSION, "field_sweep.csv", sweep.to_csv())
            logger.debug("df_G/dB = %.4e Hz/T from %d bias points", sweep.slope, len(sweep.points))
            return sweep.slope, EstimateSource.MICROMAGNETIC
    return analytic_field_slope(mode.f_G, material.Ms, config.disc.polarity), EstimateSource.ANALYTIC


def _axes(
    config: ExperimentConfig, sys: TwoModeSystem, slope: float, resonant_field: float
) -> tuple[np.ndarray, np.ndarray]:
    t = config.transmission
    rate = max(sys.g_hz, sys.delta_f_G, sys.kappa)
    if t.b_dc_span_t is not None:
        b_span = t.b_dc_span_t
    elif slope != 0:
        b_span = TRANSMISSION_B_SPAN_RATES * rate / abs(slope)
    else:
        raise DomainError("f_G does not depend on B_dc; set transmission.b_dc_span_t")
    f_span = t.f_span_hz if t.f_span_hz is not None else TRANSMISSION_F_SPAN_RATES * rate
    b_axis = resonant_field + np.linspace(-b_span, b_span, t.b_dc_points)
    f_axis = sys.f_cpw + np.linspace(-f_span, f_span, t.f_points)
    return b_axis, f_axis


def run_transmission(config: ExperimentConfig, writer: ArtifactWriterPort, upstream: Upstream) -> StageResult:
    mode = upstream_payload(upstream, StageName.SPECTRUM, ModeEstimate)
    coupling = upstream_payload(upstream, StageName.COUPLING, CouplingOutcome)
    field = upstream_payload(upstream, StageName.FIELD, FieldOutcome)
    g_hz = 0.0 if config.transmission.force_zero_coupling else coupling.exact.g_hz
    sys = TwoModeSystem(
        f_cpw=field.f_cpw, f_G=mode.f_G, g_hz=g_hz, delta_f_G=mode.delta_f_G, kappa=field.kappa
    )
    outputs: dict[str, str] = {}
    warnings: list[str] = []
    slope, slope_source = _fg_slope(config, mode, writer, outputs, warnings)
    resonant_field = (sys.f_cpw - sys.f_G) / slope if slope != 0 else 0.0
    b_axis, f_axis = _axes(config, sys, slope, resonant_field)

    tmap = transmission_map(sys, b_axis, f_axis, slope, convention=config.transmission.convention)
    peaks = peak_frequencies(tmap.f_axis, tmap.trace_at(resonant_field))
    outcome = TransmissionOutcome(
        g_hz=g_hz,
        fg_slope_hz_per_t=slope,
        slope_source=slope_source,
        resonant_field_t=tmap.resonant_field,
        resonant_peaks_hz=peaks,
        decoupling_field_t=decoupling_field(g_hz, slope) if g_hz > 0 and slope != 0 else None,
    )
    outputs["transmission.csv"] = writer.write_text(StageName.TRANSMISSION, "transmission.csv", tmap.to_csv())
    outputs["plot_transmission.py"] = writer.write_script(
        StageName.TRANSMISSION, "plot_transmission.py", transmission_script("transmission.csv")
    )
    outputs["transmission.txt"] = writer.write_text(StageName.TRANSMISSION, "transmission.txt", outcome.to_text())
    if g_hz > 0:
        trace = rabi_dynamics(sys.with_f_G(sys.f_cpw), Excitation.PHOTON, 2.0 / g_hz, damped=True)
        outputs["rabi.csv"] = writer.write_text(StageName.TRANSMISSION, "rabi.csv", trace.to_csv())
        outputs["plot_rabi.py"] = writer.write_script(StageName.TRANSMISSION, "plot_rabi.py", rabi_script("rabi.csv"))
    micromagnetic = slope_source is EstimateSource.MICROMAGNETIC
    stage_mode = EstimateSource.MICROMAGNETIC if micromagnetic else EstimateSource.ANALYTIC
    return StageResult(payload=outcome, mode=stage_mode, outputs=outputs, warnings=warnings)
