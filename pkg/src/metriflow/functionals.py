"""State container and the generating functionals H, S with exact
discrete functional derivatives.

The state carries the conserved densities (m, rho, ctilde, sigma).  For the
diffuse-interface families the sigma field stores the transformed entropy
density sigma^a; the total entropy density (sigma^a plus the gradient part)
is reconstructed by sigma_total.

Functional derivatives are hand-coded using the adjoint-consistent grid
operators, so they are the exact gradients of the discrete functionals (to
roundoff), not merely consistent approximations.  This exactness is what
makes the bracket identities downstream hold at the advertised tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

import numpy as np

from .anisotropy import AnisotropyFn, gamma_eval
from .errors import InadmissibleStateError, UnsupportedFamilyError
from .grid import Grid
from .thermo import EosParams, SurfaceCoefficients, eval_eos, lambda_f

if TYPE_CHECKING:
    from .metriplectic import TransportCoefficients

FAMILIES = ("GE", "GNS", "CHE0", "CHE1", "CHNS0", "CHNS1")
IDEAL_FAMILIES = ("GE", "CHE0", "CHE1")
DIFFUSE_FAMILIES = ("CHE0", "CHE1", "CHNS0", "CHNS1")


@dataclass(frozen=True)
class ModelConfig:
    """Model family and all physical parameters."""

    family: str
    grid: Grid
    eos: EosParams = field(default_factory=EosParams)
    surface: SurfaceCoefficients = field(default_factory=SurfaceCoefficients)
    anisotropy: AnisotropyFn = field(default_factory=AnisotropyFn)
    transport: "TransportCoefficients | None" = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedFamilyError(f"unknown family {self.family!r}")
        if self.is_diffuse:
            want_a = 0 if self.family.endswith("0") else 1
            if self.surface.a != want_a:
                raise ValueError(
                    f"family {self.family} requires a={want_a}, got a={self.surface.a}")
        else:
            if self.surface.lambda_u != 0.0 or self.surface.lambda_s != 0.0:
                raise ValueError(
                    f"family {self.family} has no surface-energy terms; "
                    "lambda_u and lambda_s must be 0")
        if self.is_dissipative and self.transport is None:
            raise ValueError(f"family {self.family} requires transport coefficients")

    @property
    def is_diffuse(self) -> bool:
        return self.family in DIFFUSE_FAMILIES

    @property
    def is_dissipative(self) -> bool:
        return self.family in ("GNS", "CHNS0", "CHNS1")

    @property
    def a(self) -> int:
        return self.surface.a if self.is_diffuse else 0


@dataclass(frozen=True)
class State:
    """Grid fields (m, rho, ctilde, sigma)."""

    grid: Grid
    m: np.ndarray
    rho: np.ndarray
    ctilde: np.ndarray
    sigma: np.ndarray

    def _cache(self) -> dict:
        # per-instance memo for derived fields; states are never mutated,
        # only replaced, so entries stay valid for the instance lifetime
        memo = self.__dict__.get("_derived")
        if memo is None:
            memo = {}
            object.__setattr__(self, "_derived", memo)
        return memo

    @property
    def v(self) -> np.ndarray:
        memo = self._cache()
        if "v" not in memo:
            memo["v"] = self.m / self.rho
        return memo["v"]

    @property
    def c(self) -> np.ndarray:
        memo = self._cache()
        if "c" not in memo:
            memo["c"] = self.ctilde / self.rho
        return memo["c"]

    @property
    def s(self) -> np.ndarray:
        memo = self._cache()
        if "s" not in memo:
            memo["s"] = self.sigma / self.rho
        return memo["s"]

    def validate(self, model: ModelConfig) -> None:
        """Admissibility: finite fields, rho > 0, derived T > 0, p > 0."""
        for name in ("m", "rho", "ctilde", "sigma"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise InadmissibleStateError(f"non-finite entries in {name}")
        if np.any(self.rho <= 0):
            raise InadmissibleStateError("rho must be positive everywhere")
        pt = thermo_point(self, model)
        if np.any(pt.T <= 0):
            raise InadmissibleStateError("derived temperature must be positive")
        if np.any(pt.p <= 0):
            raise InadmissibleStateError("derived pressure must be positive")

    def replace(self, **kw) -> "State":
        return replace(self, **kw)


@dataclass(frozen=True)
class FunctionalGradient:
    """Per-field variational derivatives (also reused for tendencies)."""

    m: np.ndarray
    rho: np.ndarray
    ctilde: np.ndarray
    sigma: np.ndarray

    @classmethod
    def zeros(cls, grid: Grid) -> "FunctionalGradient":
        return cls(m=grid.zeros_vector(), rho=grid.zeros(),
                   ctilde=grid.zeros(), sigma=grid.zeros())

    def dot(self, other: "FunctionalGradient", grid: Grid) -> float:
        """Discrete L2 pairing summed over all slots."""
        return (grid.inner(self.m, other.m) + grid.inner(self.rho, other.rho)
                + grid.inner(self.ctilde, other.ctilde)
                + grid.inner(self.sigma, other.sigma))

    def norm(self, grid: Grid) -> float:
        return float(np.sqrt(self.dot(self, grid)))

    def __add__(self, other):
        return FunctionalGradient(self.m + other.m, self.rho + other.rho,
                                  self.ctilde + other.ctilde, self.sigma + other.sigma)

    def __sub__(self, other):
        return FunctionalGradient(self.m - other.m, self.rho - other.rho,
                                  self.ctilde - other.ctilde, self.sigma - other.sigma)

    def __mul__(self, a):
        return FunctionalGradient(a * self.m, a * self.rho, a * self.ctilde, a * self.sigma)

    __rmul__ = __mul__


def thermo_point(state: State, model: ModelConfig):
    """eval_eos at the state, memoized per state instance."""
    memo = state._cache()
    key = ("eos", id(model.eos))
    if key not in memo:
        memo[key] = eval_eos(state.rho, state.s, state.c, model.eos)
    return memo[key]


def gamma_xi_of_state(state: State, model: ModelConfig):
    """(grad c, Gamma(grad c), xi(grad c)), memoized per state instance."""
    memo = state._cache()
    key = ("gamma", id(model.anisotropy))
    if key not in memo:
        gc = state.grid.grad(state.c)
        gamma, xi = gamma_eval(gc, model.anisotropy)
        memo[key] = (gc, gamma, xi)
    return memo[key]


def hamiltonian(state: State, model: ModelConfig) -> float:
    """Total energy: kinetic + internal + surface-gradient part."""
    g = state.grid
    pt = thermo_point(state, model)
    e = 0.5 * np.sum(state.m * state.m, axis=0) / state.rho + state.rho * pt.u
    if model.is_diffuse and model.surface.lambda_u != 0.0:
        _, gamma, _ = gamma_xi_of_state(state, model)
        e = e + 0.5 * state.rho ** model.a * model.surface.lambda_u * gamma * gamma
    return g.integrate(e)


def sigma_total(state: State, model: ModelConfig) -> np.ndarray:
    """Total entropy density field (equals sigma for the sharp families)."""
    if model.is_diffuse and model.surface.lambda_s != 0.0:
        _, gamma, _ = gamma_xi_of_state(state, model)
        return state.sigma + 0.5 * state.rho ** model.a * model.surface.lambda_s * gamma * gamma
    return state.sigma


def entropy(state: State, model: ModelConfig) -> float:
    """Entropy functional: integral of the total entropy density."""
    return state.grid.integrate(sigma_total(state, model))


def free_energy(state: State, model: ModelConfig, T_global: float = 1.0) -> float:
    """Diagnostic global free energy H - T_global * S."""
    return hamiltonian(state, model) - T_global * entropy(state, model)


def grad_H(state: State, model: ModelConfig) -> FunctionalGradient:
    """Exact discrete functional derivatives of the Hamiltonian."""
    g = state.grid
    rho, c, s = state.rho, state.c, state.s
    v = state.v
    pt = thermo_point(state, model)
    d_m = v
    d_sigma = np.asarray(pt.T)
    d_rho = -0.5 * np.sum(v * v, axis=0) + pt.u + pt.p / rho - s * pt.T - c * pt.mu
    d_ctilde = np.asarray(pt.mu).copy()
    if model.is_diffuse and model.surface.lambda_u != 0.0:
        lam_u, a = model.surface.lambda_u, model.a
        _, gamma, xi = gamma_xi_of_state(state, model)
        div_flux = g.div(rho ** a * lam_u * gamma * xi)
        if a == 1:
            d_rho = d_rho + 0.5 * lam_u * gamma * gamma
        d_rho = d_rho + c * div_flux / rho
        d_ctilde = d_ctilde - div_flux / rho
    return FunctionalGradient(m=d_m, rho=d_rho, ctilde=d_ctilde, sigma=d_sigma)


def grad_S(state: State, model: ModelConfig) -> FunctionalGradient:
    """Exact discrete functional derivatives of the entropy functional."""
    g = state.grid
    ones = np.ones(g.shape)
    d_m = g.zeros_vector()
    d_rho = g.zeros()
    d_ctilde = g.zeros()
    if model.is_diffuse and model.surface.lambda_s != 0.0:
        lam_s, a = model.surface.lambda_s, model.a
        rho = state.rho
        _, gamma, xi = gamma_xi_of_state(state, model)
        div_flux = g.div(rho ** a * lam_s * gamma * xi)
        d_ctilde = -div_flux / rho
        d_rho = state.ctilde / rho ** 2 * div_flux
        if a == 1:
            d_rho = d_rho + 0.5 * lam_s * gamma * gamma
    return FunctionalGradient(m=d_m, rho=d_rho, ctilde=d_ctilde, sigma=ones)


def generalized_mu(state: State, model: ModelConfig) -> np.ndarray:
    """Generalized chemical potential with the surface-gradient correction.

    mu_Gamma = mu - (1/rho) div(lambda_f(T) rho^a Gamma xi); reduces to the
    plain chemical potential for the sharp-interface families.
    """
    memo = state._cache()
    key = ("mu_gamma", id(model))
    if key not in memo:
        memo[key] = _generalized_mu(state, model)
    return memo[key]


def _generalized_mu(state: State, model: ModelConfig) -> np.ndarray:
    pt = thermo_point(state, model)
    mu = np.asarray(pt.mu) * np.ones(state.grid.shape)
    if not model.is_diffuse or (model.surface.lambda_u == 0.0
                                and model.surface.lambda_s == 0.0):
        return mu
    lam_f = lambda_f(pt.T, model.surface)
    _, gamma, xi = gamma_xi_of_state(state, model)
    flux = lam_f * state.rho ** model.a * gamma * xi
    return mu - state.grid.div(flux) / state.rho
