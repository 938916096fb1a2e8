"""Functionals: H and S values, exact discrete gradients, generalized mu."""

import numpy as np
import pytest

from metriflow import (EosParams, FunctionalGradient, Grid,
                       InadmissibleStateError, ModelConfig, State,
                       SurfaceCoefficients, TransportCoefficients,
                       UnsupportedFamilyError, entropy, eval_eos, free_energy,
                       generalized_mu, grad_H, grad_S, hamiltonian,
                       smooth_state)
from metriflow.brackets import TestFunctional
from metriflow.fields import directional_derivative, random_gradient
from metriflow.functionals import sigma_total

GRID1 = Grid(dim=1, n=(32,), length=(1.0,))
GRID2 = Grid(dim=2, n=(16,), length=(1.0,))

SURF1 = SurfaceCoefficients(lambda_u=2e-3, lambda_s=1e-3, a=1)
SURF0 = SurfaceCoefficients(lambda_u=2e-3, lambda_s=1e-3, a=0)
TRANSPORT = TransportCoefficients(eta=0.01, zeta=0.005, kappa=0.02, dcoef=0.03)


def make_model(family, grid=GRID1, **kw):
    if family.startswith("CH"):
        surf = SURF0 if family.endswith("0") else SURF1
    else:
        surf = SurfaceCoefficients(lambda_u=0.0, lambda_s=0.0)
    tr = TRANSPORT if family in ("GNS", "CHNS0", "CHNS1") else None
    return ModelConfig(family=family, grid=grid, surface=surf, transport=tr, **kw)


def uniform_state(grid, rho=1.0, v=0.0, c=0.0, s=0.0):
    m = np.full((grid.dim,) + grid.shape, v) * rho
    return State(grid=grid, m=m, rho=np.full(grid.shape, rho),
                 ctilde=np.full(grid.shape, rho * c),
                 sigma=np.full(grid.shape, rho * s))


# ------------------------------------------------------------ model config

def test_unknown_family_rejected():
    with pytest.raises(UnsupportedFamilyError):
        ModelConfig(family="MHD", grid=GRID1)


def test_family_a_mismatch_rejected():
    with pytest.raises(ValueError):
        ModelConfig(family="CHE0", grid=GRID1, surface=SURF1)
    with pytest.raises(ValueError):
        ModelConfig(family="CHNS1", grid=GRID1, surface=SURF0,
                    transport=TRANSPORT)


def test_sharp_family_rejects_surface_terms():
    with pytest.raises(ValueError):
        ModelConfig(family="GE", grid=GRID1, surface=SURF1)


def test_dissipative_family_requires_transport():
    with pytest.raises(ValueError):
        ModelConfig(family="GNS", grid=GRID1)


# ------------------------------------------------------------ state checks

def test_validate_accepts_smooth_state():
    model = make_model("CHNS1")
    smooth_state(GRID1, model, seed=1).validate(model)


def test_validate_rejects_nonpositive_density():
    model = make_model("GE")
    st = uniform_state(GRID1)
    bad = st.replace(rho=st.rho - 2.0)
    with pytest.raises(InadmissibleStateError):
        bad.validate(model)


def test_validate_rejects_nonfinite():
    model = make_model("GE")
    st = uniform_state(GRID1)
    sig = st.sigma.copy()
    sig[3] = np.nan
    with pytest.raises(InadmissibleStateError):
        st.replace(sigma=sig).validate(model)


def test_derived_fields():
    st = uniform_state(GRID1, rho=2.0, v=0.5, c=0.3, s=-0.1)
    assert np.allclose(st.v, 0.5)
    assert np.allclose(st.c, 0.3)
    assert np.allclose(st.s, -0.1)


# -------------------------------------------------------------- functionals

def test_hamiltonian_uniform_state():
    model = make_model("CHNS1")
    st = uniform_state(GRID1, rho=1.4, c=0.2, s=0.1)
    pt = eval_eos(1.4, 0.1, 0.2, model.eos)
    assert hamiltonian(st, model) == pytest.approx(1.4 * float(pt.u), rel=1e-13)


def test_hamiltonian_sharp_reduction():
    # with no surface terms H is exactly kinetic + internal
    model = make_model("GNS")
    st = smooth_state(GRID1, model, seed=3)
    pt = eval_eos(st.rho, st.s, st.c, model.eos)
    direct = GRID1.integrate(
        0.5 * np.sum(st.m * st.m, axis=0) / st.rho + st.rho * np.asarray(pt.u))
    assert hamiltonian(st, model) == pytest.approx(direct, rel=1e-14)


def test_hamiltonian_against_refined_quadrature():
    # smooth_state samples fixed continuum functions, so refining the grid
    # gives an independent quadrature oracle for the same functional
    vals = {}
    for n in (64, 512):
        g = Grid(dim=1, n=(n,), length=(1.0,))
        model = make_model("CHE1", grid=g)
        st = smooth_state(g, model, seed=9)
        vals[n] = hamiltonian(st, model)
    assert vals[64] == pytest.approx(vals[512], rel=1e-3)


def test_entropy_uniform_state():
    model = make_model("CHNS1")
    st = uniform_state(GRID2, rho=1.0, s=0.25)
    assert entropy(st, model) == pytest.approx(0.25, rel=1e-13)


def test_entropy_reduces_without_lambda_s():
    model = ModelConfig(family="CHE1", grid=GRID1,
                        surface=SurfaceCoefficients(lambda_u=1e-3, lambda_s=0.0, a=1))
    st = smooth_state(GRID1, model, seed=4)
    assert entropy(st, model) == GRID1.integrate(st.sigma)


def test_sigma_total_a_independent_at_unit_density():
    st = smooth_state(GRID1, make_model("CHE1"), seed=5).replace(
        rho=np.ones(GRID1.shape))
    m1 = ModelConfig(family="CHE1", grid=GRID1, surface=SURF1)
    m0 = ModelConfig(family="CHE0", grid=GRID1, surface=SURF0)
    assert np.allclose(sigma_total(st, m1), sigma_total(st, m0), atol=1e-15)


def test_free_energy_definition():
    model = make_model("CHNS1")
    st = smooth_state(GRID1, model, seed=6)
    assert free_energy(st, model, T_global=0.7) == pytest.approx(
        hamiltonian(st, model) - 0.7 * entropy(st, model), rel=1e-13)


# ------------------------------------------------------------- gradients

@pytest.mark.parametrize("family", ["GE", "GNS", "CHE0", "CHE1", "CHNS0", "CHNS1"])
def test_grad_H_matches_directional_derivative(family):
    model = make_model(family)
    st = smooth_state(GRID1, model, seed=8)
    func = TestFunctional(value=lambda s: hamiltonian(s, model),
                          gradient=lambda s: grad_H(s, model))
    Hg = grad_H(st, model)
    for trial in range(20):
        direction = random_gradient(GRID1, seed=300 + trial)
        fd = directional_derivative(func, st, direction)
        exact = Hg.dot(direction, GRID1)
        assert fd == pytest.approx(exact, rel=1e-5, abs=1e-8)


@pytest.mark.parametrize("family", ["GE", "CHE0", "CHE1"])
def test_grad_S_matches_directional_derivative(family):
    model = make_model(family)
    st = smooth_state(GRID1, model, seed=8)
    func = TestFunctional(value=lambda s: entropy(s, model),
                          gradient=lambda s: grad_S(s, model))
    Sg = grad_S(st, model)
    for trial in range(20):
        direction = random_gradient(GRID1, seed=500 + trial)
        fd = directional_derivative(func, st, direction)
        exact = Sg.dot(direction, GRID1)
        assert fd == pytest.approx(exact, rel=1e-5, abs=1e-8)


def test_grad_H_momentum_slot_is_velocity():
    model = make_model("CHNS1")
    st = smooth_state(GRID1, model, seed=10)
    assert np.allclose(grad_H(st, model).m, st.m / st.rho, atol=1e-14)


def test_grad_H_concentration_slot_uniform():
    model = make_model("CHE1")
    st = uniform_state(GRID1, rho=1.2, c=0.4, s=0.0)
    pt = eval_eos(1.2, 0.0, 0.4, model.eos)
    assert np.allclose(grad_H(st, model).ctilde, float(pt.mu), atol=1e-14)


def test_grad_S_sigma_slot_is_one():
    for family in ("GE", "CHE1", "CHNS0"):
        model = make_model(family)
        st = smooth_state(GRID1, model, seed=11)
        assert np.all(grad_S(st, model).sigma == 1.0)


def test_grad_S_trivial_without_lambda_s():
    model = make_model("GNS")
    st = smooth_state(GRID1, model, seed=12)
    Sg = grad_S(st, model)
    assert np.all(Sg.rho == 0.0) and np.all(Sg.ctilde == 0.0)
    assert np.all(Sg.m == 0.0)


# ---------------------------------------------------------- generalized mu

def test_generalized_mu_uniform_concentration():
    model = make_model("CHE1")
    st = uniform_state(GRID1, rho=1.1, c=0.6)
    pt = eval_eos(1.1, 0.0, 0.6, model.eos)
    assert np.allclose(generalized_mu(st, model), float(pt.mu), atol=1e-13)


def test_generalized_mu_a0_assembly():
    # a = 0: mu_Gamma = mu - div(lambda_f * Gamma * xi) / rho, assembled
    # here independently with the same grid operators
    model = make_model("CHE0")
    st = smooth_state(GRID1, model, seed=13)
    from metriflow.functionals import gamma_xi_of_state, thermo_point
    from metriflow.thermo import lambda_f as lam_f_of
    pt = thermo_point(st, model)
    _, gamma, xi = gamma_xi_of_state(st, model)
    lam_f = lam_f_of(np.asarray(pt.T), model.surface)
    expected = np.asarray(pt.mu) - GRID1.div(lam_f * gamma * xi) / st.rho
    assert np.allclose(generalized_mu(st, model), expected, atol=1e-12)


def test_functional_gradient_algebra():
    a = random_gradient(GRID1, seed=14)
    b = random_gradient(GRID1, seed=15)
    s = a + 2.0 * b
    assert np.allclose(s.rho, a.rho + 2.0 * b.rho)
    d = s - a
    assert np.allclose(d.sigma, 2.0 * b.sigma)
    z = FunctionalGradient.zeros(GRID1)
    assert z.norm(GRID1) == 0.0
    assert a.dot(b, GRID1) == pytest.approx(b.dot(a, GRID1), rel=1e-14)
