import math

import pytest
from pydantic import ValidationError

from cavity.system import TwoModeSystem, normal_modes, rwa_eigenfrequencies


class DescribeRwaEigenfrequencies:

    def should_return_the_bare_modes_without_coupling(self):
        sys = TwoModeSystem(f_cpw=1.093e9, f_G=1.2e9, g_hz=0.0)

        assert rwa_eigenfrequencies(sys) == (1.2e9, 1.093e9)

    def should_split_a_resonant_pair_by_twice_the_coupling(self):
        sys = TwoModeSystem(f_cpw=1e9, f_G=1e9, g_hz=1e6)

        f_plus, f_minus = rwa_eigenfrequencies(sys)

        assert f_plus - f_minus == pytest.approx(2e6, rel=1e-9)

    @pytest.mark.parametrize("sign", [1, -1])
    def should_approach_the_dispersive_shift_far_from_resonance(self, sign):
        g = 1e6
        delta = sign * 100 * g
        sys = TwoModeSystem(f_cpw=1e9, f_G=1e9 + delta, g_hz=g)

        f_plus, f_minus = rwa_eigenfrequencies(sys)
        cavity_like = f_minus if sign > 0 else f_plus

        assert sys.f_cpw - cavity_like == pytest.approx(g**2 / delta, rel=0.01)


class DescribeNormalModes:

    def should_match_the_rwa_pair_without_losses(self):
        sys = TwoModeSystem(f_cpw=1e9, f_G=1.01e9, g_hz=2e6)

        upper, lower = normal_modes(sys)

        assert (upper.real, lower.real) == pytest.approx(rwa_eigenfrequencies(sys), rel=1e-12)
        assert upper.imag == pytest.approx(0.0, abs=1e-3)

    def should_narrow_the_splitting_with_unequal_losses(self):
        g, kappa, delta_f = 5e6, 1e6, 3e6
        sys = TwoModeSystem(f_cpw=1e9, f_G=1e9, g_hz=g, kappa=kappa, delta_f_G=delta_f)

        upper, lower = normal_modes(sys)

        half_split = math.sqrt(g**2 - (kappa - delta_f) ** 2 / 16)
        assert upper.real - 1e9 == pytest.approx(half_split, rel=1e-6)
        assert 1e9 - lower.real == pytest.approx(half_split, rel=1e-6)
        assert -2 * upper.imag == pytest.approx((kappa + delta_f) / 2, rel=1e-6)
        assert -2 * lower.imag == pytest.approx((kappa + delta_f) / 2, rel=1e-6)

    def should_collapse_onto_the_resonator_in_the_weak_regime(self):
        sys = TwoModeSystem(f_cpw=1e9, f_G=1e9, g_hz=1e6, kappa=1e6, delta_f_G=10e6)

        upper, lower = normal_modes(sys)

        assert upper.real == pytest.approx(1e9, rel=1e-12)
        assert lower.real == pytest.approx(1e9, rel=1e-12)
        assert upper.imag != pytest.approx(lower.imag)


def should_reject_negative_coupling():
    with pytest.raises(ValidationError):
        TwoModeSystem(f_cpw=1e9, f_G=1e9, g_hz=-1.0)


def should_report_signed_detuning():
    sys = TwoModeSystem(f_cpw=1.1e9, f_G=1e9, g_hz=1e6)

    assert sys.detuning == pytest.approx(-1e8)
    assert sys.with_f_G(1.1e9).detuning == 0.0
    assert sys.with_coupling(0.0).g_hz == 0.0
