"""metriflow: structure-preserving two-phase compressible flow.

Hamiltonian / entropy functionals with exact discrete gradients, a family
of noncanonical Poisson brackets, Kulkarni-Nomizu metriplectic 4-brackets
for the dissipative dynamics, and desk-scale scenarios with verification
suites for the conservation and entropy-production structure.
"""

from .anisotropy import AnisotropyFn, gamma_eval, homogeneity_residuals, parse_anisotropy
from .brackets import (TestFunctional, capillary_force, ideal_rhs,
                       poisson_bracket, transform_gradients,
                       untransform_gradients)
from .dynamics import (Diagnostics, diagnostics, integrate, stability_limit,
                       step_rk4, total_rhs)
from .errors import (ConfigError, InadmissibleStateError, IntegrationError,
                     MetriflowError, ThermoDomainError, UnsupportedFamilyError)
from .fields import linear_functional, quadratic_functional, random_gradient, smooth_state
from .functionals import (FAMILIES, FunctionalGradient, ModelConfig, State,
                          entropy, free_energy, generalized_mu, grad_H,
                          grad_S, hamiltonian, sigma_total)
from .grid import Grid
from .metriplectic import (OnsagerBlocks, TransportCoefficients,
                           dissipative_rhs, entropy_production_rate,
                           kn_4bracket, lam4, metriplectic_2bracket,
                           onsager_blocks, onsager_fluxes,
                           sectional_curvature, viscous_stress)
from .scenarios import SCENARIO_NAMES, Scenario, make_scenario, zero_crossings
from .thermo import (EosParams, SurfaceCoefficients, ThermoPoint, eval_eos,
                     internal_energy, lambda_f, modified_gibbs)
from .verification import verify

__version__ = "0.1.0"

__all__ = [
    "AnisotropyFn", "gamma_eval", "homogeneity_residuals", "parse_anisotropy",
    "TestFunctional", "capillary_force", "ideal_rhs", "poisson_bracket",
    "transform_gradients", "untransform_gradients",
    "Diagnostics", "diagnostics", "integrate", "stability_limit",
    "step_rk4", "total_rhs",
    "ConfigError", "InadmissibleStateError", "IntegrationError",
    "MetriflowError", "ThermoDomainError", "UnsupportedFamilyError",
    "linear_functional", "quadratic_functional", "random_gradient", "smooth_state",
    "FAMILIES", "FunctionalGradient", "ModelConfig", "State", "entropy",
    "free_energy", "generalized_mu", "grad_H", "grad_S", "hamiltonian",
    "sigma_total",
    "Grid",
    "OnsagerBlocks", "TransportCoefficients", "dissipative_rhs",
    "entropy_production_rate", "kn_4bracket", "lam4", "metriplectic_2bracket",
    "onsager_blocks", "onsager_fluxes", "sectional_curvature", "viscous_stress",
    "SCENARIO_NAMES", "Scenario", "make_scenario", "zero_crossings",
    "EosParams", "SurfaceCoefficients", "ThermoPoint", "eval_eos",
    "internal_energy", "lambda_f", "modified_gibbs",
    "verify",
]
