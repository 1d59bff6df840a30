import math

import pytest

from physics.errors import DomainError, VortexLostError
from physics.materials import material_preset, reference_disc
from physics.models import DiscGeometry
from spectroscopy.field_sweep import (
    FieldSweepResult,
    SweepSettings,
    analytic_field_slope,
    field_sweep_fG,
    fit_field_dependence,
)

GEOM = DiscGeometry(r=100e-9, t=15e-9)


def _linear_response(slope):
    def frequency(geom, material, b_dc, polarity, settings):
        return 1.4e9 + polarity * slope * b_dc

    return frequency


def should_fit_a_straight_line():
    slope, intercept, residual = fit_field_dependence([0.0, 0.01, 0.02], [1.0e9, 1.1e9, 1.2e9])

    assert slope == pytest.approx(1e10)
    assert intercept == pytest.approx(1.0e9)
    assert residual == pytest.approx(0.0, abs=1e-12)


def should_report_a_single_point_without_slope():
    assert fit_field_dependence([0.01], [1.3e9]) == (0.0, 1.3e9, 0.0)


class DescribeFieldSweep:

    def should_give_opposite_slopes_for_opposite_polarities(self, mocker):
        mocker.patch("spectroscopy.field_sweep.gyrotropic_frequency_at", side_effect=_linear_response(2e9))
        fields = [-0.02, 0.0, 0.02]

        up = field_sweep_fG(GEOM, material_preset("CoFe"), fields, 1)
        down = field_sweep_fG(GEOM, material_preset("CoFe"), fields, -1)

        assert up.slope == pytest.approx(2e9)
        assert down.slope == pytest.approx(-2e9)
        assert up.intercept == pytest.approx(down.intercept)

    def should_keep_points_in_field_order(self, mocker):
        mocker.patch("spectroscopy.field_sweep.gyrotropic_frequency_at", side_effect=_linear_response(2e9))

        result = field_sweep_fG(GEOM, material_preset("CoFe"), [0.02, -0.02], 1)

        assert [b for b, _f in result.points] == [0.02, -0.02]

    def should_propagate_the_field_where_the_vortex_is_lost(self, mocker):
        def frequency(geom, material, b_dc, polarity, settings):
            if b_dc > 0.1:
                raise VortexLostError("core reversed", b_dc)
            return 1.4e9

        mocker.patch("spectroscopy.field_sweep.gyrotropic_frequency_at", side_effect=frequency)

        with pytest.raises(VortexLostError) as excinfo:
            field_sweep_fG(GEOM, material_preset("CoFe"), [0.0, 0.2], 1)

        assert excinfo.value.b_dc == 0.2


def should_write_sweep_rows():
    result = FieldSweepResult(
        polarity=-1, points=[(0.01, 1.4e9)], slope=0.0, intercept=1.4e9, max_residual_fraction=0.0
    )

    assert result.to_csv().splitlines() == ["b_dc_T,f_G_Hz,polarity", "0.01,1400000000.0,-1"]


def should_build_a_sinc_excitation_from_settings():
    exc = SweepSettings(duration=100e-9).excitation()

    assert exc.duration == 100e-9
    assert exc.f_cutoff == SweepSettings().f_cutoff


@pytest.mark.slow
def should_shift_the_gyrotropic_frequency_oppositely_for_opposite_cores():
    cofe = material_preset("CoFe")
    fields = [-0.05, -0.025, 0.0, 0.025, 0.05]

    up = field_sweep_fG(GEOM, cofe, fields, 1, n_jobs=5)
    down = field_sweep_fG(GEOM, cofe, fields, -1, n_jobs=5)

    assert dict(up.points)[0.0] == pytest.approx(reference_disc(GEOM.r, GEOM.t).f_G, rel=0.1)
    assert dict(down.points)[0.0] == pytest.approx(dict(up.points)[0.0], rel=0.01)
    assert up.slope > 0 > down.slope
    assert up.max_residual_fraction < 0.02
    assert down.max_residual_fraction < 0.02


class DescribeAnalyticFieldSlope:

    def should_follow_the_core_polarity(self):
        cofe = material_preset("CoFe")

        up = analytic_field_slope(1.255e9, cofe.Ms, 1)
        down = analytic_field_slope(1.255e9, cofe.Ms, -1)

        assert up == pytest.approx(-down)
        assert up == pytest.approx(1.255e9 / (4e-7 * math.pi * cofe.Ms))

    def should_reject_a_vanishing_frequency(self):
        with pytest.raises(DomainError):
            analytic_field_slope(0.0, 1e6, 1)
