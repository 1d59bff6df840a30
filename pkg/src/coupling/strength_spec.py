import logging
import math

import pytest

from coupling.strength import (
    CouplingInputs,
    CouplingReport,
    Regime,
    coupling_approx,
    coupling_exact,
    decoupling_field,
    response_amplitude,
)
from cpw.uw_fit import UwFit
from physics.errors import DomainError
from physics.models import PHYSICAL


@pytest.fixture
def inputs():
    return CouplingInputs(b_rms_x_at_rc=4e-9, V=6e-20, chi_x=7e9, delta_f_G=3e6, f_G=1.1e9)


class DescribeCouplingExact:

    def should_scale_linearly_with_the_field(self, inputs):
        doubled = inputs.model_copy(update={"b_rms_x_at_rc": 8e-9})

        assert coupling_exact(doubled).g_angular == pytest.approx(2 * coupling_exact(inputs).g_angular)

    def should_scale_with_the_root_of_the_volume(self, inputs):
        quadrupled = inputs.model_copy(update={"V": 4 * inputs.V})

        assert coupling_exact(quadrupled).g_angular == pytest.approx(2 * coupling_exact(inputs).g_angular)

    def should_report_ordinary_frequency_beside_the_angular_rate(self, inputs):
        report = coupling_exact(inputs)

        assert report.g_hz == pytest.approx(report.g_angular / (2 * math.pi))
        assert report.strong_ratio == pytest.approx(4 * report.g_hz / inputs.delta_f_G)

    def should_satisfy_both_response_relations(self, inputs):
        report = coupling_exact(inputs)

        delta_m = response_amplitude(report, inputs)

        assert PHYSICAL.hbar * report.g_angular == pytest.approx(inputs.V * inputs.b_rms_x_at_rc * delta_m, rel=1e-10)
        assert delta_m * report.strong_ratio == pytest.approx(inputs.chi_x * inputs.b_rms_x_at_rc, rel=1e-10)


class DescribeRegime:

    def should_be_strong_above_unit_ratio(self):
        assert CouplingReport(g_angular=2 * math.pi * 0.3e6, delta_f_G=1e6).regime is Regime.STRONG
        assert CouplingReport(g_angular=2 * math.pi * 0.2e6, delta_f_G=1e6).regime is Regime.WEAK

    def should_not_change_when_coupling_and_linewidth_scale_together(self):
        report = CouplingReport(g_angular=2 * math.pi * 0.3e6, delta_f_G=1e6)
        scaled = CouplingReport(g_angular=2 * math.pi * 0.3e9, delta_f_G=1e9)

        assert scaled.regime is report.regime
        assert scaled.strong_ratio == pytest.approx(report.strong_ratio)

    def should_serialize_derived_quantities(self):
        text = CouplingReport(g_angular=2 * math.pi * 0.3e6, delta_f_G=1e6).to_text()

        assert "regime = strong" in text


class DescribeCouplingApprox:

    def should_grow_as_root_r_for_a_line_current(self):
        small = coupling_approx(2 / 3, 1e9, 50.0, 100e-9, 1 / 100e-9, delta_f_G=1e6)
        large = coupling_approx(2 / 3, 1e9, 50.0, 400e-9, 1 / 400e-9, delta_f_G=1e6)

        assert large.g_angular == pytest.approx(2 * small.g_angular)

    def should_grow_eightfold_when_the_frequency_quadruples(self):
        base = coupling_approx(2 / 3, 1e9, 50.0, 200e-9, 3e6, delta_f_G=1e6)
        faster = coupling_approx(2 / 3, 4e9, 50.0, 200e-9, 3e6, delta_f_G=1e6)

        assert faster.g_angular == pytest.approx(8 * base.g_angular)

    def should_evaluate_the_closed_form_with_angular_frequency(self):
        r, f = 200e-9, 1e9
        omega = 2 * math.pi * f
        expected = (2 / 3) / 4 * math.sqrt(math.pi * PHYSICAL.mu0 * omega**3 / 50.0) * r**1.5 / r

        report = coupling_approx(2 / 3, f, 50.0, r, 1 / r, delta_f_G=1e6)

        assert report.g_angular == pytest.approx(expected, rel=1e-12)

    def should_warn_when_extrapolating_a_fit(self, caplog):
        fit = UwFit(a1=1.0, a2=0.0, alpha=0.5, w=1e-6, fit_range=(100e-9, 400e-9))

        with caplog.at_level(logging.WARNING, logger="coupling.strength"):
            report = coupling_approx(2 / 3, 1e9, 50.0, 800e-9, fit, delta_f_G=1e6)

        assert report.warnings
        assert "outside the u_w fit range" in caplog.text

    def should_reject_non_positive_inputs(self):
        with pytest.raises(DomainError):
            coupling_approx(2 / 3, 0.0, 50.0, 200e-9, 3e6, delta_f_G=1e6)


def should_detune_by_ten_couplings():
    assert decoupling_field(1e6, 5e9) == pytest.approx(2e-3)
    assert decoupling_field(1e6, -5e9) == pytest.approx(2e-3)


def should_refuse_to_decouple_without_field_dependence():
    with pytest.raises(DomainError):
        decoupling_field(1e6, 0.0)
