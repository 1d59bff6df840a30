import pytest

from cpw.field import uw_at
from cpw.uw_fit import UwFit, fit_uw
from physics.errors import DomainError, FitResidualError
from physics.models import ResonatorSpec

RADII = [100e-9, 150e-9, 200e-9, 250e-9, 300e-9, 400e-9]


def _spec(w):
    return ResonatorSpec(f_cpw=1e9, kappa=1e5, w=w)


@pytest.mark.parametrize("w", [200e-9, 500e-9, 1e-6])
def should_fit_within_five_percent_with_a_fractional_exponent(w):
    fit = fit_uw(_spec(w), RADII)

    assert 0 < fit.alpha < 1
    assert fit.max_residual < 0.05
    assert fit.fit_range == (100e-9, 400e-9)


def should_match_the_field_model_at_a_held_out_radius():
    spec = _spec(1e-6)
    fit = fit_uw(spec, RADII)

    assert fit.evaluate(275e-9) == pytest.approx(uw_at(spec, 275e-9), rel=0.05)


def should_raise_with_the_residual_table_above_threshold():
    with pytest.raises(FitResidualError) as excinfo:
        fit_uw(_spec(1e-6), RADII, max_residual=1e-12)

    assert len(excinfo.value.residuals) == len(RADII)


def should_need_six_radii():
    with pytest.raises(DomainError, match="at least"):
        fit_uw(_spec(1e-6), RADII[:5])


def should_need_a_factor_four_span():
    with pytest.raises(DomainError, match="span"):
        fit_uw(_spec(1e-6), [100e-9, 120e-9, 140e-9, 160e-9, 180e-9, 200e-9])


class DescribeUwFit:

    @pytest.fixture
    def fit(self):
        return UwFit(a1=1.0, a2=0.0, alpha=0.5, w=1e-6, fit_range=(1e-7, 4e-7))

    def should_reduce_to_a_line_current_without_near_field_term(self, fit):
        assert fit.evaluate(2e-7) == pytest.approx(5e6)

    def should_know_its_fit_range(self, fit):
        assert fit.covers(2e-7)
        assert not fit.covers(1e-6)

    def should_serialize_its_coefficients(self, fit):
        assert "alpha = 0.5" in fit.to_text()
