"""Grid operator tests: stencil values, adjointness, and quadrature."""

import numpy as np
import pytest

from metriflow import Grid


@pytest.fixture(params=[1, 2])
def grid(request):
    return Grid(dim=request.param, n=(24,) * request.param,
                length=(1.5,) * request.param)


def test_grid_rejects_bad_dim():
    with pytest.raises(ValueError):
        Grid(dim=3, n=(8, 8, 8), length=(1.0, 1.0, 1.0))


def test_grid_rejects_tiny_axis():
    with pytest.raises(ValueError):
        Grid(dim=1, n=(3,), length=(1.0,))


def test_grid_rejects_nonpositive_length():
    with pytest.raises(ValueError):
        Grid(dim=1, n=(8,), length=(0.0,))


def test_scalar_n_broadcasts_to_both_axes():
    g = Grid(dim=2, n=16, length=2.0)
    assert g.shape == (16, 16)
    assert g.length == (2.0, 2.0)
    assert g.h == (0.125, 0.125)


def test_deriv_of_constant_is_zero(grid):
    f = 3.7 * np.ones(grid.shape)
    for ax in range(grid.dim):
        assert np.all(grid.deriv(f, ax) == 0.0)


def test_deriv_matches_discrete_symbol():
    # the periodic central stencil applied to a single Fourier mode gives
    # the mode back, scaled by sin(2 pi h / L) / h
    g = Grid(dim=1, n=(64,), length=(1.0,))
    x = g.coords()[0]
    f = np.sin(2.0 * np.pi * x)
    expected = (np.sin(2.0 * np.pi * g.h[0]) / g.h[0]) * np.cos(2.0 * np.pi * x)
    assert np.allclose(g.deriv(f, 0), expected, rtol=0, atol=1e-13)


def test_deriv_equals_roll_reference(grid):
    rng = np.random.default_rng(11)
    f = rng.standard_normal(grid.shape)
    for ax in range(grid.dim):
        ref = (np.roll(f, -1, axis=ax) - np.roll(f, 1, axis=ax)) \
            * (1.0 / (2.0 * grid.h[ax]))
        assert np.array_equal(grid.deriv(f, ax), ref)


def test_deriv_second_order_convergence():
    errs = []
    for n in (32, 64, 128):
        g = Grid(dim=1, n=(n,), length=(1.0,))
        x = g.coords()[0]
        f = np.exp(np.sin(2.0 * np.pi * x))
        exact = 2.0 * np.pi * np.cos(2.0 * np.pi * x) * f
        errs.append(np.abs(g.deriv(f, 0) - exact).max())
    order = np.log2(errs[0] / errs[1])
    assert order > 1.9
    assert np.log2(errs[1] / errs[2]) > 1.9


def test_grad_shape_check():
    g = Grid(dim=2, n=(8,), length=(1.0,))
    with pytest.raises(ValueError):
        g.grad(np.zeros((8, 9)))


def test_div_shape_check():
    g = Grid(dim=1, n=(8,), length=(1.0,))
    with pytest.raises(ValueError):
        g.div(np.zeros((2, 8)))


def test_div_is_negative_adjoint_of_grad(grid):
    # the exactness everything else rests on:
    # integrate(f * div u) == -integrate(grad f . u)
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        f = rng.standard_normal(grid.shape)
        u = rng.standard_normal((grid.dim,) + grid.shape)
        lhs = grid.integrate(f * grid.div(u))
        rhs = -grid.inner(grid.grad(f), u)
        worst = max(worst, abs(lhs - rhs))
    assert worst <= 1e-12


def test_divergence_integrates_to_zero(grid):
    rng = np.random.default_rng(6)
    u = rng.standard_normal((grid.dim,) + grid.shape)
    assert abs(grid.integrate(grid.div(u))) <= 1e-12


def test_grad_integrates_to_zero(grid):
    rng = np.random.default_rng(7)
    f = rng.standard_normal(grid.shape)
    gf = grid.grad(f)
    for k in range(grid.dim):
        assert abs(grid.integrate(gf[k])) <= 1e-12


def test_integrate_constant(grid):
    vol = float(np.prod(grid.length))
    assert grid.integrate(np.ones(grid.shape)) == pytest.approx(vol, abs=1e-14)


def test_integrate_single_mode_vanishes():
    g = Grid(dim=1, n=(48,), length=(2.0,))
    x = g.coords()[0]
    assert abs(g.integrate(np.sin(2.0 * np.pi * x / 2.0))) <= 1e-12


def test_integrate_linearity(grid):
    rng = np.random.default_rng(8)
    f = rng.standard_normal(grid.shape)
    h = rng.standard_normal(grid.shape)
    alpha = 1.37
    lhs = grid.integrate(alpha * f + h)
    rhs = alpha * grid.integrate(f) + grid.integrate(h)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_div_tensor_contracts_first_slot():
    g = Grid(dim=2, n=(16,), length=(1.0,))
    rng = np.random.default_rng(9)
    t = rng.standard_normal((2, 2) + g.shape)
    out = g.div_tensor(t)
    for i in range(2):
        expected = g.deriv(t[0, i], 0) + g.deriv(t[1, i], 1)
        assert np.array_equal(out[i], expected)


def test_laplacian_is_wide_stencil(grid):
    rng = np.random.default_rng(10)
    f = rng.standard_normal(grid.shape)
    assert np.array_equal(grid.laplacian(f), grid.div(grid.grad(f)))


def test_norm_and_inner_consistency(grid):
    rng = np.random.default_rng(12)
    f = rng.standard_normal(grid.shape)
    assert grid.norm(f) == pytest.approx(np.sqrt(grid.inner(f, f)), rel=1e-14)
