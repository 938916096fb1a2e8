"""Time integration and running diagnostics.

The semidiscrete system is advanced with the classical four-stage
Runge-Kutta method.  Every stage state is validated for admissibility
(finite fields, positive density, positive derived temperature and
pressure); a failed stage raises IntegrationError carrying the step index.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .brackets import ideal_rhs
from .errors import InadmissibleStateError, IntegrationError
from .functionals import (FunctionalGradient, ModelConfig, State, entropy,
                          hamiltonian, thermo_point)
from .metriplectic import dissipative_rhs, entropy_production_rate
from .thermo import eval_eos, lambda_f


def total_rhs(state: State, model: ModelConfig) -> FunctionalGradient:
    """Ideal plus dissipative tendencies."""
    rhs = ideal_rhs(state, model)
    if model.is_dissipative:
        rhs = rhs + dissipative_rhs(state, model)
    return rhs


def _advance(state: State, rhs: FunctionalGradient, dt: float) -> State:
    return state.replace(m=state.m + dt * rhs.m,
                         rho=state.rho + dt * rhs.rho,
                         ctilde=state.ctilde + dt * rhs.ctilde,
                         sigma=state.sigma + dt * rhs.sigma)


def stability_limit(state: State, model: ModelConfig) -> float:
    """Crude explicit step bound from the stiffest linearized scale.

    Uses the symbol of the wide (div-grad) central stencil: a diffusive
    operator with coefficient nu contributes at most nu * dim / h^2, and
    the fourth-order interfacial operator at most D * lambda_f * (dim/h^2)^2.
    The classical four-stage Runge-Kutta method is stable out to about 2.79
    on the negative real axis and 2.83 on the imaginary axis; 2.5 is used
    throughout as a margin.
    """
    g = state.grid
    h = min(g.h)
    dim = g.dim
    pt = thermo_point(state, model)
    rho_min = float(state.rho.min())
    cs2 = model.eos.gamma_ad * np.asarray(pt.p) / state.rho
    vmax = float(np.abs(state.v).max() + np.sqrt(cs2.max()))
    limit = 2.5 * h / (dim * max(vmax, 1e-300))
    tr = model.transport
    if tr is not None:
        eta_eff = (4.0 / 3.0) * tr.eta + tr.zeta
        if eta_eff > 0:
            limit = min(limit, 2.5 * h * h * rho_min / (dim * eta_eff))
        kap_max = float(np.max(np.abs(np.asarray(tr.kappa_of(state, model)))))
        if kap_max > 0:
            limit = min(limit, 2.5 * h * h * rho_min * model.eos.c_v / (dim * kap_max))
        dmax = float(np.max(np.abs(np.asarray(tr.dcoef_of(state, model)))))
        if dmax > 0 and model.is_diffuse:
            lam = float(np.max(np.abs(lambda_f(np.asarray(pt.T), model.surface))))
            if lam > 0:
                limit = min(limit, 2.5 * h ** 4 * rho_min / (dim * dim * dmax * lam))
    return limit


def step_rk4(state: State, model: ModelConfig, dt: float,
             step_index: int = 0, check: bool = True) -> State:
    """One classical RK4 step; validates every stage state."""

    def guard(st: State, tag: str) -> State:
        if check:
            try:
                st.validate(model)
            except InadmissibleStateError as exc:
                raise IntegrationError(
                    f"inadmissible state at {tag}: {exc}", step=step_index) from exc
        return st

    k1 = total_rhs(state, model)
    k2 = total_rhs(guard(_advance(state, k1, 0.5 * dt), "stage 2"), model)
    k3 = total_rhs(guard(_advance(state, k2, 0.5 * dt), "stage 3"), model)
    k4 = total_rhs(guard(_advance(state, k3, dt), "stage 4"), model)
    combined = (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (1.0 / 6.0)
    return guard(_advance(state, combined, dt), "step end")


@dataclass(frozen=True)
class Diagnostics:
    """Scalar invariants and monitors at one instant."""

    t: float
    mass: float
    momentum: tuple[float, ...]
    concentration: float
    energy: float
    entropy: float
    entropy_production: float
    temperature_min: float

    def row(self) -> list[float]:
        px = self.momentum[0]
        py = self.momentum[1] if len(self.momentum) > 1 else 0.0
        return [self.t, self.mass, px, py, self.concentration, self.energy,
                self.entropy, self.entropy_production, self.temperature_min]


def diagnostics(state: State, model: ModelConfig, t: float = 0.0) -> Diagnostics:
    g = state.grid
    mom = tuple(float(g.integrate(state.m[i])) for i in range(g.dim))
    pt = thermo_point(state, model)
    _, prod = entropy_production_rate(state, model) if model.is_dissipative \
        else (None, 0.0)
    return Diagnostics(
        t=t,
        mass=float(g.integrate(state.rho)),
        momentum=mom,
        concentration=float(g.integrate(state.ctilde)),
        energy=hamiltonian(state, model),
        entropy=entropy(state, model),
        entropy_production=float(prod),
        temperature_min=float(np.min(np.asarray(pt.T))),
    )


def integrate(state: State, model: ModelConfig, dt: float, n_steps: int,
              callback=None, check: bool = True,
              warn_on_stiff: bool = True) -> State:
    """Advance n_steps of size dt, optionally invoking callback(i, state).

    callback is called after each accepted step with the 1-based step index.
    """
    if dt <= 0 or n_steps < 0:
        raise ValueError("dt must be positive and n_steps nonnegative")
    if warn_on_stiff:
        limit = stability_limit(state, model)
        if dt > limit:
            warnings.warn(
                f"dt = {dt:g} exceeds the estimated stability limit {limit:g}",
                RuntimeWarning, stacklevel=2)
    for i in range(1, n_steps + 1):
        state = step_rk4(state, model, dt, step_index=i, check=check)
        if callback is not None:
            callback(i, state)
    return state
