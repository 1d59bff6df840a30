import numpy as np
import pytest

from micromag.exchange import exchange_field
from micromag.fields import FieldModel, zeeman_field
from micromag.grid import box_grid, build_disc_grid, normalize, vortex_ansatz
from physics.materials import material_preset
from physics.models import PHYSICAL, DiscGeometry


def should_apply_uniform_zeeman_field_inside_the_body():
    cofe = material_preset("CoFe")
    grid = build_disc_grid(DiscGeometry(r=100e-9, t=15e-9), cofe, cells=(32, 32, 4))

    h = zeeman_field(grid, (0.0, 0.0, 0.02))

    assert np.allclose(h[grid.mask][:, 2], 0.02 / PHYSICAL.mu0)
    assert np.all(h[~grid.mask] == 0.0)


def should_accept_a_per_cell_profile():
    grid = box_grid((3, 2, 1), (1e-9, 1e-9, 1e-9))
    profile = np.zeros((3, 2, 1, 3))
    profile[0, 0, 0, 0] = 1e-9

    h = zeeman_field(grid, profile)

    assert h[0, 0, 0, 0] == pytest.approx(1e-9 / PHYSICAL.mu0)
    assert h[1, 0, 0, 0] == 0.0


def should_sum_terms_into_total_field():
    cofe = material_preset("CoFe")
    grid = build_disc_grid(DiscGeometry(r=100e-9, t=15e-9), cofe, cells=(32, 32, 4))
    model = FieldModel(grid, cofe)
    m = vortex_ansatz(grid, cofe.Ms).m

    terms = model.terms(m, (0.0, 0.0, 0.01))

    assert np.allclose(terms.H_exch, exchange_field(m, grid, cofe))
    assert np.allclose(model.total(m, (0.0, 0.0, 0.01)), terms.H_exch + terms.H_demag + terms.H_zeeman)


def should_keep_fields_zero_outside_the_mask():
    cofe = material_preset("CoFe")
    grid = build_disc_grid(DiscGeometry(r=100e-9, t=15e-9), cofe, cells=(32, 32, 4))
    rng = np.random.default_rng(4)
    m = normalize(rng.normal(size=(*grid.shape, 3)), grid.mask)

    total = FieldModel(grid, cofe).total(m, (0.01, 0.0, 0.0))

    assert np.all(total[~grid.mask] == 0.0)
