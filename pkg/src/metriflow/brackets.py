"""Noncanonical Poisson brackets and the ideal equations of motion.

Three bracket families are implemented: the base Lie-Poisson bracket for
the sharp-interface (GE/GNS) system, and its two transformed versions for
the diffuse-interface a=1 and a=0 entropy variables.  The transformed
brackets keep the corresponding entropy functional as a Casimir invariant.

Each antisymmetric pairing is evaluated as an explicit difference of the
swapped expression, so antisymmetry holds to exact floating-point negation.
Identities that rely on the continuum product rule (Casimir annihilation,
bracket/RHS consistency) hold at second order in the grid spacing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnsupportedFamilyError
from .functionals import (FunctionalGradient, ModelConfig, State,
                          gamma_xi_of_state, grad_H, sigma_total,
                          thermo_point)
from .thermo import eval_eos, lambda_f


@dataclass(frozen=True)
class TestFunctional:
    """A functional with both a scalar callback and its gradient.

    Used by the property suites: the gradient can be validated against a
    directional derivative of value().
    """

    __test__ = False  # not a pytest class, despite the name

    value: Callable[[State], float]
    gradient: Callable[[State], FunctionalGradient]


def _directional(grid, fm, scalar_field):
    # (fm . grad)(scalar_field), fm a vector field
    return np.sum(fm * grid.grad(scalar_field), axis=0)


def _vec_advect(grid, fm, gm):
    # vector field with components fm_j d_j gm_i
    return np.stack([_directional(grid, fm, gm[i]) for i in range(grid.dim)])


def _div_outer(grid, u, w):
    # div over the first slot of u (x) w: (d_j (u_j w_i))_i
    t = np.stack([u * w[i] for i in range(grid.dim)], axis=1)  # t[j, i]
    return grid.div_tensor(t)


def poisson_bracket(Fg: FunctionalGradient, Gg: FunctionalGradient,
                    state: State, model: ModelConfig) -> float:
    """Family-selected Poisson bracket of two functional gradients."""
    g = state.grid
    m, rho, ctilde, sigma = state.m, state.rho, state.ctilde, state.sigma

    def pair(f_of_FG):
        return f_of_FG(Fg, Gg) - f_of_FG(Gg, Fg)

    # momentum self-coupling and the rho / ctilde advection pairings are
    # shared by all three families
    integrand = np.sum(m * pair(lambda F, G: _vec_advect(g, F.m, G.m)), axis=0)
    integrand = integrand + rho * pair(lambda F, G: _directional(g, F.m, G.rho))
    integrand = integrand + ctilde * pair(lambda F, G: _directional(g, F.m, G.ctilde))

    if model.family in ("GE", "GNS"):
        integrand = integrand + sigma * pair(lambda F, G: _directional(g, F.m, G.sigma))
        return -g.integrate(integrand)

    lam_s, a = model.surface.lambda_s, model.a
    gc, gamma, xi = gamma_xi_of_state(state, model)

    if a == 1:
        integrand = integrand - lam_s * pair(
            lambda F, G: np.sum(F.m * _div_outer(g, rho * G.sigma * gamma * xi, gc), axis=0))
        sig_w = sigma + 0.5 * rho * lam_s * gamma * gamma
        integrand = integrand + sig_w * pair(lambda F, G: _directional(g, F.m, G.sigma))
        return -g.integrate(integrand)

    # a == 0
    integrand = integrand - lam_s * pair(
        lambda F, G: np.sum(F.m * _div_outer(g, G.sigma * gamma * xi, gc), axis=0))
    integrand = integrand + 0.5 * lam_s * pair(
        lambda F, G: _directional(g, F.m, gamma * gamma * G.sigma))
    integrand = integrand + sigma * pair(lambda F, G: _directional(g, F.m, G.sigma))
    return -g.integrate(integrand)


def transform_gradients(hatFg: FunctionalGradient, state: State,
                        model: ModelConfig) -> FunctionalGradient:
    """Map gradients in the transformed (sigma^a) variables to gradients in
    the original (sigma) variables.

    The m and sigma slots pass through unchanged; rho and ctilde pick up
    the surface-gradient corrections.  With lambda_s = 0 this is the
    identity.  See untransform_gradients for the inverse map.
    """
    if not model.is_diffuse:
        raise UnsupportedFamilyError("gradient transform applies to diffuse families only")
    g = state.grid
    lam_s, a = model.surface.lambda_s, model.a
    rho, ctilde = state.rho, state.ctilde
    _, gamma, xi = gamma_xi_of_state(state, model)
    div_flux = g.div(rho ** a * lam_s * gamma * xi * hatFg.sigma)
    d_rho = hatFg.rho - ctilde / rho ** 2 * div_flux
    if a == 1:
        d_rho = d_rho - 0.5 * lam_s * gamma * gamma * hatFg.sigma
    d_ctilde = hatFg.ctilde + div_flux / rho
    return FunctionalGradient(m=hatFg.m, rho=d_rho, ctilde=d_ctilde, sigma=hatFg.sigma)


def untransform_gradients(Fg: FunctionalGradient, state: State,
                          model: ModelConfig) -> FunctionalGradient:
    """Inverse of transform_gradients (original variables to sigma^a ones)."""
    if not model.is_diffuse:
        raise UnsupportedFamilyError("gradient transform applies to diffuse families only")
    g = state.grid
    lam_s, a = model.surface.lambda_s, model.a
    rho, ctilde = state.rho, state.ctilde
    _, gamma, xi = gamma_xi_of_state(state, model)
    div_flux = g.div(rho ** a * lam_s * gamma * xi * Fg.sigma)
    d_rho = Fg.rho + ctilde / rho ** 2 * div_flux
    if a == 1:
        d_rho = d_rho + 0.5 * lam_s * gamma * gamma * Fg.sigma
    d_ctilde = Fg.ctilde - div_flux / rho
    return FunctionalGradient(m=Fg.m, rho=d_rho, ctilde=d_ctilde, sigma=Fg.sigma)


def capillary_force(state: State, model: ModelConfig) -> np.ndarray:
    """Capillary acceleration (force per unit mass) in the momentum equation.

    Zero for the sharp-interface families; for the diffuse families this is
    the non-pressure part of the interface stress divergence.
    """
    g = state.grid
    if not model.is_diffuse:
        return g.zeros_vector()
    pt = thermo_point(state, model)
    lam_f = lambda_f(pt.T, model.surface)
    gc, gamma, xi = gamma_xi_of_state(state, model)
    a = model.a
    force = -_div_outer(g, lam_f * state.rho ** a * gamma * xi, gc)
    if a == 0:
        force = force + g.grad(0.5 * lam_f * gamma * gamma)
    return force / state.rho


def ideal_rhs(state: State, model: ModelConfig) -> FunctionalGradient:
    """Tendencies of (m, rho, ctilde, sigma) for the ideal (bracket) part.

    Advected densities use divergence form so the global mass, concentration
    and total-entropy budgets telescope to zero exactly on the periodic grid.
    """
    g = state.grid
    rho, ctilde = state.rho, state.ctilde
    v = state.v
    pt = thermo_point(state, model)

    rho_dot = -g.div(rho * v)
    ctilde_dot = -g.div(ctilde * v)

    accel = -_vec_advect(g, v, v) - g.grad(np.asarray(pt.p)) / rho
    accel = accel + capillary_force(state, model)
    m_dot = rho * accel + v * rho_dot

    sig_tot = sigma_total(state, model)
    sig_tot_dot = -g.div(sig_tot * v)
    if model.is_diffuse and model.surface.lambda_s != 0.0:
        # chain rule back to the evolved sigma^a field
        lam_s, a = model.surface.lambda_s, model.a
        _, gamma, xi = gamma_xi_of_state(state, model)
        c_dot = (ctilde_dot - state.c * rho_dot) / rho
        grad_rate = rho ** a * lam_s * gamma * np.sum(xi * g.grad(c_dot), axis=0)
        if a == 1:
            grad_rate = grad_rate + 0.5 * lam_s * gamma * gamma * rho_dot
        sigma_dot = sig_tot_dot - grad_rate
    else:
        sigma_dot = sig_tot_dot
    return FunctionalGradient(m=m_dot, rho=rho_dot, ctilde=ctilde_dot, sigma=sigma_dot)
