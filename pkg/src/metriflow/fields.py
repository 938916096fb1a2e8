"""Deterministic smooth random fields and test functionals.

Fields are built from short, seed-determined lists of Fourier modes, so
the same seed produces the same continuum function on every grid
resolution.  That makes them usable in refinement (convergence) studies,
where the field must be a fixed function of x rather than per-grid noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .brackets import TestFunctional
from .functionals import FunctionalGradient, ModelConfig, State
from .grid import Grid


@dataclass(frozen=True)
class FourierModes:
    """amp[i] * cos(2*pi*(k[i] . x)/L + phase[i]) summed over i."""

    amps: np.ndarray     # (n_modes,)
    kvecs: np.ndarray    # (n_modes, dim) integer wavevectors
    phases: np.ndarray   # (n_modes,)


def make_modes(rng: np.random.Generator, dim: int, n_modes: int = 4,
               kmax: int = 3, amp: float = 1.0) -> FourierModes:
    kvecs = rng.integers(-kmax, kmax + 1, size=(n_modes, dim))
    # avoid the zero mode so the field has zero mean
    for i in range(n_modes):
        while not kvecs[i].any():
            kvecs[i] = rng.integers(-kmax, kmax + 1, size=dim)
    amps = amp * rng.uniform(0.3, 1.0, size=n_modes) / n_modes
    phases = rng.uniform(0.0, 2.0 * np.pi, size=n_modes)
    return FourierModes(amps=amps, kvecs=kvecs, phases=phases)


def fourier_field(grid: Grid, modes: FourierModes) -> np.ndarray:
    x = grid.coords()
    out = grid.zeros()
    for amp, k, ph in zip(modes.amps, modes.kvecs, modes.phases):
        arg = ph
        for d in range(grid.dim):
            arg = arg + 2.0 * np.pi * k[d] * x[d] / grid.length[d]
        out = out + amp * np.cos(arg)
    return out


def smooth_field(grid: Grid, seed: int, amp: float = 1.0, kmax: int = 3) -> np.ndarray:
    """A zero-mean smooth periodic scalar field determined by seed."""
    rng = np.random.default_rng(seed)
    return fourier_field(grid, make_modes(rng, grid.dim, kmax=kmax, amp=amp))


def smooth_state(grid: Grid, model: ModelConfig, seed: int = 0,
                 amp: float = 0.1, kmax: int = 3) -> State:
    """An admissible smooth state with O(amp) departures from rest.

    Resolution-independent: refining the grid samples the same functions.
    """
    rng = np.random.default_rng(seed)
    rho = 1.0 + amp * fourier_field(grid, make_modes(rng, grid.dim, kmax=kmax))
    v = np.stack([amp * fourier_field(grid, make_modes(rng, grid.dim, kmax=kmax))
                  for _ in range(grid.dim)])
    c = amp * fourier_field(grid, make_modes(rng, grid.dim, kmax=kmax))
    s = amp * fourier_field(grid, make_modes(rng, grid.dim, kmax=kmax))
    state = State(grid=grid, m=rho * v, rho=rho, ctilde=rho * c, sigma=rho * s)
    state.validate(model)
    return state


def random_gradient(grid: Grid, seed: int, amp: float = 1.0,
                    kmax: int = 3) -> FunctionalGradient:
    """A smooth, seed-determined covector (functional-gradient) field."""
    rng = np.random.default_rng(seed)
    m = np.stack([amp * fourier_field(grid, make_modes(rng, grid.dim, kmax=kmax))
                  for _ in range(grid.dim)])
    return FunctionalGradient(
        m=m,
        rho=amp * fourier_field(grid, make_modes(rng, grid.dim, kmax=kmax)),
        ctilde=amp * fourier_field(grid, make_modes(rng, grid.dim, kmax=kmax)),
        sigma=amp * fourier_field(grid, make_modes(rng, grid.dim, kmax=kmax)))


def linear_functional(grid: Grid, seed: int) -> TestFunctional:
    """F[psi] = sum_slots int w_slot * psi_slot with fixed smooth weights."""
    w = random_gradient(grid, seed)

    def value(state: State) -> float:
        return w.dot(FunctionalGradient(m=state.m, rho=state.rho,
                                        ctilde=state.ctilde, sigma=state.sigma), grid)

    return TestFunctional(value=value, gradient=lambda state: w)


def quadratic_functional(grid: Grid, seed: int) -> TestFunctional:
    """F[psi] = (1/2) sum_slots int w_slot * psi_slot**2."""
    w = random_gradient(grid, seed, amp=0.5)

    def fields(state: State) -> FunctionalGradient:
        return FunctionalGradient(m=state.m, rho=state.rho,
                                  ctilde=state.ctilde, sigma=state.sigma)

    def value(state: State) -> float:
        psi = fields(state)
        half = FunctionalGradient(m=0.5 * w.m * psi.m, rho=0.5 * w.rho * psi.rho,
                                  ctilde=0.5 * w.ctilde * psi.ctilde,
                                  sigma=0.5 * w.sigma * psi.sigma)
        return half.dot(psi, grid)

    def gradient(state: State) -> FunctionalGradient:
        psi = fields(state)
        return FunctionalGradient(m=w.m * psi.m, rho=w.rho * psi.rho,
                                  ctilde=w.ctilde * psi.ctilde,
                                  sigma=w.sigma * psi.sigma)

    return TestFunctional(value=value, gradient=gradient)


def directional_derivative(func: TestFunctional, state: State,
                           direction: FunctionalGradient,
                           eps: float = 1e-6) -> float:
    """Central-difference derivative of func.value along direction."""
    plus = state.replace(m=state.m + eps * direction.m,
                         rho=state.rho + eps * direction.rho,
                         ctilde=state.ctilde + eps * direction.ctilde,
                         sigma=state.sigma + eps * direction.sigma)
    minus = state.replace(m=state.m - eps * direction.m,
                          rho=state.rho - eps * direction.rho,
                          ctilde=state.ctilde - eps * direction.ctilde,
                          sigma=state.sigma - eps * direction.sigma)
    return (func.value(plus) - func.value(minus)) / (2.0 * eps)
