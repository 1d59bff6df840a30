import numpy as np
import pytest

from micromag.diagnostics import VortexState, vortex_diagnostics
from micromag.energy import total_energy
from micromag.fields import FieldModel
from micromag.grid import build_disc_grid, uniform_state
from micromag.relax import RelaxSettings, max_torque, relax
from physics.errors import ConvergenceError, VortexLostError
from physics.materials import material_preset
from physics.models import DiscGeometry


@pytest.fixture
def cofe():
    return material_preset("CoFe")


@pytest.fixture
def disc_grid(cofe):
    return build_disc_grid(DiscGeometry(r=100e-9, t=15e-9), cofe)


def _field_model(mocker, grid, h):
    model = mocker.Mock(spec=FieldModel)
    model.total.return_value = np.broadcast_to(h, (*grid.shape, 3)).copy()
    return model


def should_measure_torque_relative_to_ms():
    m = np.array([[[[1.0, 0.0, 0.0]]]])
    h = np.array([[[[0.0, 2.0, 0.0]]]])

    torque = max_torque(m, h, 4.0, np.ones((1, 1, 1), dtype=bool))

    assert torque == pytest.approx(0.5)


class DescribeRelax:

    def should_stop_at_the_first_check_when_torque_is_below_tolerance(self, mocker, disc_grid, cofe):
        model = _field_model(mocker, disc_grid, np.zeros(3))
        seed = VortexState(polarity=-1, circulation=1)

        result = relax(disc_grid, cofe, 0.0, seed, settings=RelaxSettings(check_every=5), field_model=model)

        assert result.steps == 5
        assert result.state.polarity == -1
        assert result.state.circulation == 1
        assert result.residual_torque == 0.0

    def should_raise_with_residual_when_budget_runs_out(self, mocker, disc_grid, cofe):
        model = _field_model(mocker, disc_grid, np.array([1e5, 0.0, 0.0]))
        settings = RelaxSettings(max_steps=10, check_every=5, torque_tolerance=1e-12)

        with pytest.raises(ConvergenceError) as excinfo:
            relax(disc_grid, cofe, 0.0, VortexState(polarity=1, circulation=1), settings=settings, field_model=model)

        assert excinfo.value.residual > 1e-12

    def should_check_torque_at_the_last_step_off_the_check_cadence(self, mocker, disc_grid, cofe):
        model = _field_model(mocker, disc_grid, np.zeros(3))
        mocker.patch("micromag.relax.max_torque", side_effect=[1.0, 0.0])
        settings = RelaxSettings(max_steps=7, check_every=5, torque_tolerance=1e-6)
        seed = VortexState(polarity=1, circulation=1)

        result = relax(disc_grid, cofe, 0.0, seed, settings=settings, field_model=model)

        assert result.steps == 7
        assert result.residual_torque == 0.0

    def should_raise_vortex_lost_when_no_core_survives(self, mocker, disc_grid, cofe):
        model = _field_model(mocker, disc_grid, np.zeros(3))
        initial = uniform_state(disc_grid, (1.0, 0.0, 0.0), cofe.Ms)

        with pytest.raises(VortexLostError) as excinfo:
            relax(disc_grid, cofe, 0.02, VortexState(polarity=1, circulation=1), field_model=model, initial=initial)

        assert excinfo.value.b_dc == 0.02

    def should_pass_the_out_of_plane_field_to_the_model(self, mocker, disc_grid, cofe):
        model = _field_model(mocker, disc_grid, np.zeros(3))

        relax(disc_grid, cofe, 0.05, VortexState(polarity=1, circulation=1), field_model=model)

        assert model.total.call_args.args[1] == (0.0, 0.0, 0.05)


@pytest.mark.slow
class DescribeRelaxedReferenceDisc:

    @pytest.fixture(scope="class")
    def relaxed(self):
        cofe = material_preset("CoFe")
        grid = build_disc_grid(DiscGeometry(r=200e-9, t=30e-9), cofe)
        model = FieldModel(grid, cofe, workers=4)
        return {
            p: relax(grid, cofe, 0.0, VortexState(polarity=p, circulation=1), field_model=model) for p in (1, -1)
        } | {"grid": grid, "model": model, "material": cofe}

    def should_hold_the_seeded_vortex(self, relaxed):
        grid, result = relaxed["grid"], relaxed[1]

        average = result.magnetization.average(grid)

        assert abs(average[0]) < 0.01 * result.magnetization.Ms
        assert abs(average[1]) < 0.01 * result.magnetization.Ms
        assert average[2] > 0
        assert vortex_diagnostics(result.magnetization, grid).polarity == 1

    def should_mirror_the_core_for_negative_polarity(self, relaxed):
        grid = relaxed["grid"]

        up = relaxed[1].magnetization.average(grid)
        down = relaxed[-1].magnetization.average(grid)

        assert down[2] == pytest.approx(-up[2], rel=1e-3)

    def should_beat_the_uniform_in_plane_state(self, relaxed):
        grid, model, cofe = relaxed["grid"], relaxed["model"], relaxed["material"]
        uniform = uniform_state(grid, (1.0, 0.0, 0.0), cofe.Ms)

        vortex_energy = total_energy(relaxed[1].magnetization, grid, cofe, field_model=model)
        uniform_energy = total_energy(uniform, grid, cofe, field_model=model)

        assert vortex_energy.total < uniform_energy.total
