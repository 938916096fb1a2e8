"""Time integration: RK4 order, admissibility guards, diagnostics."""

import warnings

import numpy as np
import pytest

from metriflow import (Grid, IntegrationError, ModelConfig,
                       SurfaceCoefficients, TransportCoefficients,
                       diagnostics, eval_eos, ideal_rhs, integrate,
                       smooth_state, stability_limit, step_rk4, total_rhs)
from metriflow.functionals import State

GRID = Grid(dim=1, n=(32,), length=(1.0,))
GE = ModelConfig(family="GE", grid=GRID)
GNS = ModelConfig(family="GNS", grid=GRID,
                  transport=TransportCoefficients(eta=0.01, zeta=0.0,
                                                  kappa=0.02, dcoef=0.0))


def rest_state(grid, rho=1.0, c=0.0, s=0.0):
    r = np.full(grid.shape, rho)
    return State(grid=grid, m=np.zeros((grid.dim,) + grid.shape), rho=r,
                 ctilde=c * r, sigma=s * r)


def test_total_rhs_reduces_to_ideal_for_ge():
    state = smooth_state(GRID, GE, seed=1)
    a = total_rhs(state, GE)
    b = ideal_rhs(state, GE)
    for slot in ("m", "rho", "ctilde", "sigma"):
        assert np.array_equal(getattr(a, slot), getattr(b, slot))


def test_fixed_point_is_bitwise_stationary():
    state = rest_state(GRID, rho=1.0, c=0.0, s=0.2)
    out = step_rk4(state, GE, dt=1e-3)
    assert np.array_equal(out.m, state.m)
    assert np.array_equal(out.rho, state.rho)
    assert np.array_equal(out.ctilde, state.ctilde)
    assert np.array_equal(out.sigma, state.sigma)


def test_rk4_self_convergence_order():
    # halve dt repeatedly on a smooth run; Richardson differences must
    # shrink at fourth order
    grid = Grid(dim=1, n=(64,), length=(1.0,))
    model = ModelConfig(family="GE", grid=grid)
    state0 = smooth_state(grid, model, seed=2, amp=0.05)
    t_end = 0.05
    finals = []
    for n_steps in (10, 20, 40, 80):
        st = integrate(state0, model, t_end / n_steps, n_steps,
                       warn_on_stiff=False)
        finals.append(np.concatenate([st.m.ravel(), st.rho.ravel(),
                                      st.ctilde.ravel(), st.sigma.ravel()]))
    errs = [np.abs(a - b).max() for a, b in zip(finals[:-1], finals[1:])]
    orders = [np.log2(e1 / e2) for e1, e2 in zip(errs[:-1], errs[1:])]
    assert min(orders) >= 3.9


def test_mass_is_conserved_over_a_run():
    state = smooth_state(GRID, GNS, seed=3)
    mass0 = GRID.integrate(state.rho)
    final = integrate(state, GNS, dt=2e-4, n_steps=200, warn_on_stiff=False)
    assert abs(GRID.integrate(final.rho) - mass0) <= 1e-12 * abs(mass0)


def test_integration_error_carries_step_index():
    # a huge dt destroys admissibility; the failure must report which step
    state = smooth_state(GRID, GNS, seed=4)
    with pytest.raises(IntegrationError) as excinfo:
        integrate(state, GNS, dt=10.0, n_steps=5, warn_on_stiff=False)
    assert excinfo.value.step == 1


def test_integrate_rejects_bad_arguments():
    state = rest_state(GRID)
    with pytest.raises(ValueError):
        integrate(state, GE, dt=-1e-3, n_steps=10)
    with pytest.raises(ValueError):
        integrate(state, GE, dt=1e-3, n_steps=-1)


def test_integrate_warns_when_dt_exceeds_limit():
    state = smooth_state(GRID, GNS, seed=5)
    limit = stability_limit(state, GNS)
    with pytest.warns(RuntimeWarning):
        integrate(state, GNS, dt=2.0 * limit, n_steps=0)


def test_integrate_callback_sees_every_step():
    state = smooth_state(GRID, GE, seed=6)
    seen = []
    integrate(state, GE, dt=1e-4, n_steps=7,
              callback=lambda i, st: seen.append(i), warn_on_stiff=False)
    assert seen == list(range(1, 8))


def test_stability_limit_scales_with_resolution():
    st32 = smooth_state(GRID, GNS, seed=7)
    g64 = Grid(dim=1, n=(64,), length=(1.0,))
    m64 = ModelConfig(family="GNS", grid=g64, transport=GNS.transport)
    st64 = smooth_state(g64, m64, seed=7)
    # conduction-limited: halving h should quarter the limit (approximately)
    ratio = stability_limit(st32, GNS) / stability_limit(st64, m64)
    assert 2.0 < ratio < 8.0


def test_diagnostics_uniform_state():
    st = rest_state(GRID, rho=1.5, c=0.2, s=0.1)
    d = diagnostics(st, GNS, t=0.3)
    pt = eval_eos(1.5, 0.1, 0.2, GNS.eos)
    assert d.t == 0.3
    assert d.mass == pytest.approx(1.5, rel=1e-14)
    assert d.momentum == (0.0,)
    assert d.concentration == pytest.approx(0.3, rel=1e-13)
    assert d.energy == pytest.approx(1.5 * float(pt.u), rel=1e-13)
    assert d.entropy == pytest.approx(0.15, rel=1e-13)
    assert d.entropy_production == 0.0
    assert d.temperature_min == pytest.approx(float(pt.T), rel=1e-14)


def test_diagnostics_row_layout():
    st = rest_state(GRID)
    row = diagnostics(st, GE, t=1.0).row()
    assert len(row) == 9
    assert row[0] == 1.0
    assert row[3] == 0.0  # Py placeholder in 1D


def test_entropy_production_column_positive_for_dissipative_run():
    state = smooth_state(GRID, GNS, seed=8)
    d = diagnostics(state, GNS)
    assert d.entropy_production > 0.0
