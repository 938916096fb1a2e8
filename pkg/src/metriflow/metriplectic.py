"""Kulkarni-Nomizu 4-brackets, dissipative dynamics, entropy production,
Onsager blocks, and the sectional-curvature scalar.

The 4-bracket uses the collocated weighted form (weight 1): two symmetric
bilinear forms, one pointwise in the entropy slot and one built from
gradients of the momentum / entropy / concentration slots, are combined by
the Kulkarni-Nomizu product and integrated over the grid.  For the
diffuse-interface families the concentration slot is differentiated through
the pseudodifferential combination that reduces to grad(mu_Gamma) on the
Hamiltonian.

Viscous contraction uses the full 3D isotropic rank-4 tensor (trace factor
2/3) with absent velocity components treated as zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnsupportedFamilyError
from .functionals import (FunctionalGradient, ModelConfig, State,
                          gamma_xi_of_state, generalized_mu, thermo_point)
from .grid import Grid
from .thermo import eval_eos


@dataclass(frozen=True)
class TransportCoefficients:
    """Viscosities and the conductivity / diffusivity tensors.

    kappa and dcoef may be nonnegative scalars (isotropic), constant
    symmetric psd matrices of shape (dim, dim), or callables
    (state, model) -> tensor field of shape (dim, dim, *grid.shape).
    """

    eta: float = 0.0
    zeta: float = 0.0
    kappa: float | np.ndarray | Callable = 0.0
    dcoef: float | np.ndarray | Callable = 0.0

    def __post_init__(self):
        if self.eta < 0 or self.zeta < 0:
            raise ValueError("viscosities must be nonnegative")
        for name in ("kappa", "dcoef"):
            val = getattr(self, name)
            if isinstance(val, (int, float)) and val < 0:
                raise ValueError(f"{name} must be nonnegative")
            if isinstance(val, np.ndarray):
                validate_psd_matrix(val, name)

    def kappa_of(self, state, model):
        return _resolve_tensor(self.kappa, state, model)

    def dcoef_of(self, state, model):
        return _resolve_tensor(self.dcoef, state, model)


ZERO_TRANSPORT = TransportCoefficients()


def validate_psd_matrix(mat: np.ndarray, name: str, tol: float = 1e-12) -> None:
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{name} matrix must be square")
    if not np.allclose(mat, mat.T, rtol=0, atol=tol * max(1.0, float(np.abs(mat).max()))):
        raise ValueError(f"{name} matrix must be symmetric")
    if np.linalg.eigvalsh(0.5 * (mat + mat.T)).min() < -tol:
        raise ValueError(f"{name} matrix must be positive semidefinite")


def _resolve_tensor(coef, state, model):
    if callable(coef):
        return coef(state, model)
    return coef


def _apply_tensor(coef, w: np.ndarray) -> np.ndarray:
    """Contract a scalar / matrix / tensor-field coefficient with a vector field."""
    if np.isscalar(coef) or (isinstance(coef, np.ndarray) and coef.ndim == 0):
        return coef * w
    coef = np.asarray(coef)
    if coef.ndim == 2:
        return np.einsum("ij,j...->i...", coef, w)
    return np.einsum("ij...,j...->i...", coef, w)


def _quad_tensor(coef, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Pointwise x . coef . y for vector fields x, y."""
    return np.sum(x * _apply_tensor(coef, y), axis=0)


def viscous_stress(gradv: np.ndarray, eta: float, zeta: float) -> np.ndarray:
    """Contract the isotropic rank-4 viscosity tensor with a velocity gradient.

    gradv[k, l] = d_k v_l, embedded in 3x3 (trailing axes are grid axes).
    Returns stress[i, j] = eta*(dv_ij + dv_ji - (2/3) delta_ij div v)
    + zeta * delta_ij * div v.
    """
    gradv = np.asarray(gradv, dtype=float)
    if gradv.shape[:2] != (3, 3):
        raise ValueError("gradv must be embedded as a 3x3 tensor")
    trace = gradv[0, 0] + gradv[1, 1] + gradv[2, 2]
    sym = gradv + np.swapaxes(gradv, 0, 1)
    eye = np.zeros_like(gradv)
    for i in range(3):
        eye[i, i] = 1.0
    return eta * (sym - (2.0 / 3.0) * eye * trace) + zeta * eye * trace


def grad_v3(grid: Grid, vec: np.ndarray) -> np.ndarray:
    """Gradient of a vector field embedded in 3x3: out[k, l] = d_k vec_l."""
    out = np.zeros((3, 3) + grid.shape)
    for l in range(grid.dim):
        gl = grid.grad(vec[l])
        for k in range(grid.dim):
            out[k, l] = gl[k]
    return out


def _lam_quad(x3: np.ndarray, y3: np.ndarray, eta: float, zeta: float) -> np.ndarray:
    """Pointwise x : Lambda : y for 3x3-embedded tensor fields."""
    return np.sum(x3 * viscous_stress(y3, eta, zeta), axis=(0, 1))


def _visc_production_density(gradv3: np.ndarray, eta: float, zeta: float) -> np.ndarray:
    """gradv : Lambda : gradv written in a manifestly nonnegative form."""
    trace = gradv3[0, 0] + gradv3[1, 1] + gradv3[2, 2]
    sym = 0.5 * (gradv3 + np.swapaxes(gradv3, 0, 1))
    dev = sym.copy()
    for i in range(3):
        dev[i, i] = dev[i, i] - trace / 3.0
    return 2.0 * eta * np.sum(dev * dev, axis=(0, 1)) + zeta * trace * trace


def _conc_slot(Fg: FunctionalGradient, state: State, model: ModelConfig) -> np.ndarray:
    """Gradient-type concentration slot: grad F_ctilde for the sharp
    families, the pseudodifferential combination for the diffuse ones."""
    g = state.grid
    if not model.is_diffuse or model.surface.lambda_s == 0.0:
        return g.grad(Fg.ctilde)
    lam_s, a = model.surface.lambda_s, model.a
    _, gamma, xi = gamma_xi_of_state(state, model)
    inner = Fg.ctilde + g.div(state.rho ** a * lam_s * gamma * xi * Fg.sigma) / state.rho
    return g.grad(inner)



def _gradv3_of_state(state: State) -> np.ndarray:
    memo = state._cache()
    if "gradv3" not in memo:
        memo["gradv3"] = grad_v3(state.grid, state.v)
    return memo["gradv3"]


def _gradT_of_state(state: State, model: ModelConfig) -> np.ndarray:
    memo = state._cache()
    key = ("gradT", id(model.eos))
    if key not in memo:
        pt = thermo_point(state, model)
        memo[key] = state.grid.grad(np.asarray(pt.T))
    return memo[key]


def _gradmu_of_state(state: State, model: ModelConfig) -> np.ndarray:
    memo = state._cache()
    key = ("grad_mu_gamma", id(model))
    if key not in memo:
        memo[key] = state.grid.grad(generalized_mu(state, model))
    return memo[key]


def _require_dissipative(model: ModelConfig):
    if not model.is_dissipative:
        raise UnsupportedFamilyError(
            f"family {model.family} has no metriplectic bracket")


def kn_4bracket(Fg: FunctionalGradient, Gg: FunctionalGradient,
                Kg: FunctionalGradient, Ng: FunctionalGradient,
                state: State, model: ModelConfig) -> float:
    """Minimal metriplectic 4-bracket (F, G; K, N).

    Antisymmetric in (F, G) and in (K, N), symmetric under pair exchange;
    (S, H; S, H) >= 0 whenever the transport coefficients are psd.
    """
    _require_dissipative(model)
    g = state.grid
    tr = model.transport
    pt = thermo_point(state, model)
    T = np.asarray(pt.T)

    def d1(A, B):
        return B.sigma * grad_v3(g, A.m) - A.sigma * grad_v3(g, B.m)

    def d2(A, B):
        return B.sigma * g.grad(A.sigma) - A.sigma * g.grad(B.sigma)

    def d3(A, B):
        return B.sigma * _conc_slot(A, state, model) - A.sigma * _conc_slot(B, state, model)

    integrand = _lam_quad(d1(Fg, Gg), d1(Kg, Ng), tr.eta, tr.zeta)
    kappa = tr.kappa_of(state, model)
    integrand = integrand + _quad_tensor(kappa, d2(Fg, Gg), d2(Kg, Ng)) / T
    dcoef = tr.dcoef_of(state, model)
    integrand = integrand + _quad_tensor(dcoef, d3(Fg, Gg), d3(Kg, Ng))
    return g.integrate(integrand / T)


def metriplectic_2bracket(Fg: FunctionalGradient, Gg: FunctionalGradient,
                          state: State, model: ModelConfig) -> float:
    """(F, G)_H = (F, H; G, H), computed directly for speed."""
    _require_dissipative(model)
    g = state.grid
    tr = model.transport
    pt = thermo_point(state, model)
    T = np.asarray(pt.T)
    gradv = _gradv3_of_state(state)
    gradT = _gradT_of_state(state, model)
    grad_mu = _gradmu_of_state(state, model)

    x1 = T * grad_v3(g, Fg.m) - Fg.sigma * gradv
    y1 = T * grad_v3(g, Gg.m) - Gg.sigma * gradv
    integrand = _lam_quad(x1, y1, tr.eta, tr.zeta)

    x2 = T * g.grad(Fg.sigma) - Fg.sigma * gradT
    y2 = T * g.grad(Gg.sigma) - Gg.sigma * gradT
    integrand = integrand + _quad_tensor(tr.kappa_of(state, model), x2, y2) / T

    x3 = T * _conc_slot(Fg, state, model) - Fg.sigma * grad_mu
    y3 = T * _conc_slot(Gg, state, model) - Gg.sigma * grad_mu
    integrand = integrand + _quad_tensor(tr.dcoef_of(state, model), x3, y3)
    return g.integrate(integrand / T)


def dissipative_rhs(state: State, model: ModelConfig) -> FunctionalGradient:
    """Dissipative tendencies (zero for the ideal families).

    Momentum and concentration are in divergence (flux) form; the entropy
    tendency carries the heat-flux divergence plus the three production
    terms, pulled back to the evolved sigma^a field for the diffuse
    families.
    """
    g = state.grid
    if not model.is_dissipative:
        return FunctionalGradient.zeros(g)
    tr = model.transport
    pt = thermo_point(state, model)
    T = np.asarray(pt.T)

    gradv = _gradv3_of_state(state)
    stress = viscous_stress(gradv, tr.eta, tr.zeta)
    m_dot = np.stack([g.div(stress[:g.dim, i]) for i in range(g.dim)])

    grad_mu = _gradmu_of_state(state, model)
    dcoef = tr.dcoef_of(state, model)
    ctilde_dot = g.div(_apply_tensor(dcoef, grad_mu))

    kappa = tr.kappa_of(state, model)
    gradT = _gradT_of_state(state, model)
    heat = _apply_tensor(kappa, gradT)
    production = production_density(state, model)
    sigma_dot = g.div(heat / T) + production

    if model.is_diffuse and model.surface.lambda_s != 0.0:
        lam_s, a = model.surface.lambda_s, model.a
        _, gamma, xi = gamma_xi_of_state(state, model)
        c_dot = ctilde_dot / state.rho
        sigma_dot = sigma_dot - state.rho ** a * lam_s * gamma \
            * np.sum(xi * g.grad(c_dot), axis=0)
    return FunctionalGradient(m=m_dot, rho=g.zeros(), ctilde=ctilde_dot, sigma=sigma_dot)


def production_density(state: State, model: ModelConfig) -> np.ndarray:
    """Pointwise entropy production rate (nonnegative by construction)."""
    g = state.grid
    if not model.is_dissipative:
        return g.zeros()
    tr = model.transport
    pt = thermo_point(state, model)
    T = np.asarray(pt.T)
    gradv = _gradv3_of_state(state)
    gradT = _gradT_of_state(state, model)
    grad_mu = _gradmu_of_state(state, model)
    visc = _visc_production_density(gradv, tr.eta, tr.zeta)
    cond = _quad_tensor(tr.kappa_of(state, model), gradT, gradT) / T
    diff = _quad_tensor(tr.dcoef_of(state, model), grad_mu, grad_mu)
    return (visc + cond + diff) / T


def entropy_production_rate(state: State, model: ModelConfig) -> tuple[np.ndarray, float]:
    """(pointwise production field, its integral)."""
    field = production_density(state, model)
    return field, state.grid.integrate(field)


def lam4(eta: float, zeta: float) -> np.ndarray:
    """The isotropic rank-4 viscosity tensor as an explicit 3x3x3x3 array."""
    d = np.eye(3)
    lam = eta * (np.einsum("il,jk->ijkl", d, d) + np.einsum("jl,ik->ijkl", d, d)
                 - (2.0 / 3.0) * np.einsum("ij,kl->ijkl", d, d)) \
        + zeta * np.einsum("ij,kl->ijkl", d, d)
    return lam


def _embed3_matrix(coef, dim: int) -> np.ndarray:
    """Promote a scalar or (dim, dim) matrix coefficient to 3x3."""
    out = np.zeros((3, 3))
    if np.isscalar(coef) or (isinstance(coef, np.ndarray) and coef.ndim == 0):
        # isotropic coefficients act on all three directions
        return float(coef) * np.eye(3)
    coef = np.asarray(coef)
    out[:coef.shape[0], :coef.shape[1]] = coef
    return out


@dataclass(frozen=True)
class OnsagerBlocks:
    """Blocks of the Onsager matrix relating fluxes to affinities.

    Index layout (3D embedded): momentum flux rows are index pairs (i, j),
    energy and concentration rows are single spatial indices.
    """

    L_mm: np.ndarray   # (3,3,3,3)
    L_me: np.ndarray   # (3,3,3)
    L_mc: np.ndarray   # (3,3,3), identically zero
    L_ee: np.ndarray   # (3,3)
    L_ec: np.ndarray   # (3,3)
    L_cc: np.ndarray   # (3,3)

    def assemble(self) -> np.ndarray:
        """Full symmetric 15x15 matrix over (m_(ij), e_k, c_k)."""
        full = np.zeros((15, 15))
        full[:9, :9] = self.L_mm.reshape(9, 9)
        full[:9, 9:12] = self.L_me.reshape(9, 3)
        full[9:12, :9] = self.L_me.reshape(9, 3).T
        full[:9, 12:] = self.L_mc.reshape(9, 3)
        full[12:, :9] = self.L_mc.reshape(9, 3).T
        full[9:12, 9:12] = self.L_ee
        full[9:12, 12:] = self.L_ec
        full[12:, 9:12] = self.L_ec.T
        full[12:, 12:] = self.L_cc
        return full


def onsager_blocks(rho: float, s: float, c: float, v, model: ModelConfig,
                   transport: TransportCoefficients | None = None) -> OnsagerBlocks:
    """Onsager blocks at a single thermodynamic point.

    v is the velocity, given with up to three components (missing ones are
    zero).  Raises if the temperature at the point is not positive.
    """
    tr = transport if transport is not None else model.transport
    if tr is None:
        raise ValueError("transport coefficients required")
    pt = eval_eos(rho, s, c, model.eos)
    T, mu = float(pt.T), float(pt.mu)
    if T <= 0:
        raise ValueError("Onsager blocks require T > 0")
    v3 = np.zeros(3)
    v = np.atleast_1d(np.asarray(v, dtype=float))
    v3[:v.shape[0]] = v
    lam = lam4(tr.eta, tr.zeta)
    kap = _embed3_matrix(_resolve_tensor(tr.kappa, None, model), model.grid.dim)
    dmat = _embed3_matrix(_resolve_tensor(tr.dcoef, None, model), model.grid.dim)
    L_mm = T * lam
    L_me = T * np.einsum("ijkl,l->ijk", lam, v3)
    L_mc = np.zeros((3, 3, 3))
    vlamv = np.einsum("jikl,j,l->ik", lam, v3, v3)
    L_ee = T * T * kap + T * vlamv + T * mu * mu * dmat
    L_ec = T * mu * dmat
    L_cc = T * dmat
    return OnsagerBlocks(L_mm=L_mm, L_me=L_me, L_mc=L_mc,
                         L_ee=L_ee, L_ec=L_ec, L_cc=L_cc)


def onsager_fluxes(blocks: OnsagerBlocks, aff_e: np.ndarray, aff_m: np.ndarray,
                   aff_c: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Contract the blocks with affinities at one point.

    aff_e = grad(1/T) (3,), aff_m = grad(-v/T) as (3,3) with [k, l] =
    d_k(-v_l/T), aff_c = grad(-mu/T) (3,).  Returns (J_m, J_e, J_c).
    """
    J_m = np.einsum("ijk,k->ij", blocks.L_me, aff_e) \
        + np.einsum("ijkl,kl->ij", blocks.L_mm, aff_m) \
        + np.einsum("ijk,k->ij", blocks.L_mc, aff_c)
    J_e = blocks.L_ee @ aff_e \
        + np.einsum("kli,kl->i", blocks.L_me, aff_m) \
        + blocks.L_ec @ aff_c
    J_c = blocks.L_ec.T @ aff_e \
        + np.einsum("kli,kl->i", blocks.L_mc, aff_m) \
        + blocks.L_cc @ aff_c
    return J_m, J_e, J_c


def sectional_curvature(Fg, Gg, sigma_form: Callable, m_form: Callable,
                        state: State | None = None) -> float:
    """K(F, G) for two symmetric bilinear forms on gradients.

    K = |F|^2_Sigma |G|^2_M - 2 <F,G>_Sigma <F,G>_M + |G|^2_Sigma |F|^2_M;
    nonnegative whenever both forms are psd.
    """
    sfg, sgf = sigma_form(Fg, Gg), sigma_form(Gg, Fg)
    mfg, mgf = m_form(Fg, Gg), m_form(Gg, Fg)
    scale = max(abs(sfg), abs(mfg), 1.0)
    if abs(sfg - sgf) > 1e-9 * scale or abs(mfg - mgf) > 1e-9 * scale:
        raise ValueError("bilinear form specs must be symmetric")
    return (sigma_form(Fg, Fg) * m_form(Gg, Gg)
            - 2.0 * sfg * mfg
            + sigma_form(Gg, Gg) * m_form(Fg, Fg))
