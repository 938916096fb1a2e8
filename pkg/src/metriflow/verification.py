"""Self-verification suites for the bracket structure.

Each suite is deterministic for a fixed seed and returns a SuiteResult with
a pass flag and numeric details.  verify() runs all suites at one of two
levels (fast / full, differing only in trial counts) and assembles a
machine-readable report; the report content is reproducible, so two runs
with the same seed produce identical files.

Tolerances: identities that hold by discrete adjointness or by construction
are checked near roundoff; identities limited by the discrete product rule
are checked by grid refinement at observed order >= 1.9, with a roundoff
floor accepted for residuals that are exactly zero discretely.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .brackets import poisson_bracket
from .dynamics import integrate, total_rhs
from .fields import random_gradient, smooth_state
from .functionals import (FAMILIES, FunctionalGradient, ModelConfig, State,
                          grad_H, grad_S)
from .grid import Grid
from .metriplectic import (TransportCoefficients, dissipative_rhs,
                           entropy_production_rate, kn_4bracket, lam4,
                           metriplectic_2bracket, onsager_blocks,
                           onsager_fluxes, sectional_curvature)
from .thermo import EosParams, SurfaceCoefficients, eval_eos

DISSIPATIVE = ("GNS", "CHNS0", "CHNS1")
ORDER_MIN = 1.9
FLOOR = 1e-12

SUITE_NAMES = ("bracket_symmetry", "casimir_convergence", "curvature",
               "onsager", "production_positivity", "budgets")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


def _counts(level: str) -> dict:
    if level == "fast":
        return dict(sym=25, casimir=6, curvature=200, onsager=200,
                    production=150, crosspath=10, budget_steps=50)
    if level == "full":
        return dict(sym=200, casimir=50, curvature=1000, onsager=1000,
                    production=1000, crosspath=30, budget_steps=200)
    raise ValueError(f"unknown level {level!r}; use 'fast' or 'full'")


def model_for(family: str, grid: Grid) -> ModelConfig:
    """A standard test model with mild, generic coefficients."""
    diffuse = family.startswith("CH")
    surface = SurfaceCoefficients(
        lambda_u=2e-3 if diffuse else 0.0,
        lambda_s=1e-3 if diffuse else 0.0,
        a=0 if family.endswith("0") else 1)
    transport = TransportCoefficients(eta=0.01, zeta=0.005, kappa=0.02,
                                      dcoef=0.03) if family in DISSIPATIVE else None
    return ModelConfig(family=family, grid=grid, eos=EosParams(),
                       surface=surface, transport=transport)


def state_hash(state: State) -> str:
    h = hashlib.sha256()
    for arr in (state.m, state.rho, state.ctilde, state.sigma):
        h.update(np.ascontiguousarray(arr).tobytes())
    return h.hexdigest()[:16]


def _observed_order(residuals: list[float]) -> float:
    """Observed order from the two finest grids (the asymptotic estimate)."""
    if residuals[-1] <= 0 or residuals[-2] <= 0:
        return np.inf
    return float(np.log2(residuals[-2] / residuals[-1]))


# ----------------------------------------------------------------- suites

def bracket_symmetry_suite(seed: int, level: str = "fast") -> SuiteResult:
    """Poisson antisymmetry / bilinearity and the 4-bracket symmetries."""
    n_trials = _counts(level)["sym"]
    grid = Grid(dim=1, n=(32,), length=(1.0,))
    rng = np.random.default_rng(seed)
    worst = {"antisym": 0.0, "bilinear": 0.0, "kn_12": 0.0, "kn_34": 0.0,
             "kn_pair": 0.0, "kn_bianchi": 0.0, "kn_psd": 0.0}
    failures = []
    for family in FAMILIES:
        model = model_for(family, grid)
        state = smooth_state(grid, model, seed=seed + 7)
        for trial in range(n_trials):
            base = int(rng.integers(0, 2 ** 31))
            F = random_gradient(grid, base)
            G = random_gradient(grid, base + 1)
            pb_fg = poisson_bracket(F, G, state, model)
            pb_gf = poisson_bracket(G, F, state, model)
            scale = max(abs(pb_fg), 1.0)
            worst["antisym"] = max(worst["antisym"], abs(pb_fg + pb_gf) / scale)

            a, b = rng.uniform(-2, 2, size=2)
            pb_lin = poisson_bracket(a * F + b * G, G, state, model)
            resid = abs(pb_lin - (a * pb_fg + b * poisson_bracket(G, G, state, model)))
            worst["bilinear"] = max(worst["bilinear"], resid / scale)

            if family in DISSIPATIVE:
                K = random_gradient(grid, base + 2)
                N = random_gradient(grid, base + 3)
                b_fgkn = kn_4bracket(F, G, K, N, state, model)
                s4 = max(abs(b_fgkn), 1.0)
                worst["kn_12"] = max(worst["kn_12"], abs(
                    b_fgkn + kn_4bracket(G, F, K, N, state, model)) / s4)
                worst["kn_34"] = max(worst["kn_34"], abs(
                    b_fgkn + kn_4bracket(F, G, N, K, state, model)) / s4)
                worst["kn_pair"] = max(worst["kn_pair"], abs(
                    b_fgkn - kn_4bracket(K, N, F, G, state, model)) / s4)
                bianchi = (b_fgkn + kn_4bracket(F, K, N, G, state, model)
                           + kn_4bracket(F, N, G, K, state, model))
                worst["kn_bianchi"] = max(worst["kn_bianchi"], abs(bianchi) / s4)
                Hg = grad_H(state, model)
                Sg = grad_S(state, model)
                shsh = kn_4bracket(Sg, Hg, Sg, Hg, state, model)
                worst["kn_psd"] = min(worst["kn_psd"], shsh)
        for key, val in worst.items():
            tol = -1e-15 if key == "kn_psd" else 1e-12
            ok = val >= tol if key == "kn_psd" else val <= tol
            if not ok and (family, key) not in failures:
                failures.append((family, key))
    passed = not failures
    return SuiteResult("bracket_symmetry", passed,
                       dict(worst=worst, failures=failures,
                            trials_per_family=n_trials))


def casimir_convergence_suite(seed: int, level: str = "fast") -> SuiteResult:
    """|{F, S^a}^a| and |{F, M}| vanish under refinement (or exactly)."""
    n_trials = _counts(level)["casimir"]
    sizes = (16, 32, 64)
    details = {}
    passed = True
    for family in FAMILIES:
        for label in ("entropy", "mass"):
            residuals = []
            for n in sizes:
                grid = Grid(dim=1, n=(n,), length=(1.0,))
                model = model_for(family, grid)
                state = smooth_state(grid, model, seed=seed + 3, kmax=2)
                if label == "entropy":
                    Cg = grad_S(state, model)
                else:
                    Cg = FunctionalGradient(m=grid.zeros_vector(),
                                            rho=np.ones(grid.shape),
                                            ctilde=grid.zeros(), sigma=grid.zeros())
                acc = 0.0
                for trial in range(n_trials):
                    F = random_gradient(grid, seed + 100 + trial, kmax=2)
                    denom = F.norm(grid) * max(Cg.norm(grid), 1.0)
                    acc += abs(poisson_bracket(F, Cg, state, model)) / denom
                residuals.append(acc / n_trials)
            floor_ok = max(residuals) <= FLOOR
            order = _observed_order(residuals)
            ok = floor_ok or order >= ORDER_MIN
            details[f"{family}:{label}"] = dict(residuals=residuals,
                                                order=None if floor_ok else order,
                                                passed=ok)
            passed = passed and ok
    return SuiteResult("casimir_convergence", passed, details)


def curvature_suite(seed: int, level: str = "fast") -> SuiteResult:
    """Nonnegative sectional curvature for psd forms; positive for pd."""
    n_trials = _counts(level)["curvature"]
    rng = np.random.default_rng(seed)
    d = 6
    min_psd = np.inf
    min_pd = np.inf
    for _ in range(n_trials):
        A = rng.standard_normal((d, d))
        B = rng.standard_normal((d, d))
        sig_mat = A @ A.T
        m_mat = B @ B.T
        F = rng.standard_normal(d)
        G = rng.standard_normal(d)
        sig_form = lambda x, y: float(x @ sig_mat @ y)
        m_form = lambda x, y: float(x @ m_mat @ y)
        scale = (np.linalg.norm(sig_mat) * np.linalg.norm(m_mat)
                 * np.linalg.norm(F) ** 2 * np.linalg.norm(G) ** 2)
        k = sectional_curvature(F, G, sig_form, m_form)
        min_psd = min(min_psd, k / scale)

        # strictly positive-definite, non-collinear case
        sig_pd = sig_mat + 0.1 * np.eye(d)
        m_pd = m_mat + 0.1 * np.eye(d)
        cosang = abs(F @ G) / (np.linalg.norm(F) * np.linalg.norm(G))
        if cosang < 0.999:
            k_pd = sectional_curvature(
                F, G, lambda x, y: float(x @ sig_pd @ y),
                lambda x, y: float(x @ m_pd @ y))
            min_pd = min(min_pd, k_pd / scale)
    passed = min_psd >= -1e-12 and min_pd > 0.0
    return SuiteResult("curvature", passed,
                       dict(min_normalized_psd=float(min_psd),
                            min_normalized_pd=float(min_pd), trials=n_trials))


def _direct_fluxes(eta, zeta, kap3, dmat3, T, mu, v3, gradv, gradT, gradmu):
    """Textbook flux formulas used as the oracle for the Onsager relation."""
    lam = lam4(eta, zeta)
    J_m = -np.einsum("ijkl,kl->ij", lam, gradv)
    J_c = -dmat3 @ gradmu
    J_e = J_m @ v3 - kap3 @ gradT - mu * (dmat3 @ gradmu)
    return J_m, J_e, J_c


def onsager_suite(seed: int, level: str = "fast",
                  transport_factory=None) -> SuiteResult:
    """Symmetry / psd of the assembled L and flux reconstruction.

    transport_factory, if given, supplies the transport coefficients per
    trial (any object with eta/zeta/kappa/dcoef); used for fault injection.
    """
    n_trials = _counts(level)["onsager"]
    rng = np.random.default_rng(seed)
    grid = Grid(dim=1, n=(4,), length=(1.0,))
    model = model_for("GNS", grid)
    worst_sym = 0.0
    min_eig = np.inf
    worst_flux = 0.0
    for _ in range(n_trials):
        if transport_factory is not None:
            tr = transport_factory(rng)
        else:
            A = rng.standard_normal((3, 3))
            B = rng.standard_normal((3, 3))
            tr = TransportCoefficients(
                eta=float(rng.uniform(0.0, 1.0)), zeta=float(rng.uniform(0.0, 1.0)),
                kappa=A @ A.T, dcoef=B @ B.T)
        rho = float(rng.uniform(0.5, 2.0))
        s = float(rng.uniform(-0.5, 0.5))
        c = float(rng.uniform(-1.5, 1.5))
        v3 = rng.uniform(-1.0, 1.0, size=3)
        blocks = onsager_blocks(rho, s, c, v3, model, transport=tr)
        L = blocks.assemble()
        scale = max(float(np.abs(L).max()), 1.0)
        worst_sym = max(worst_sym, float(np.abs(L - L.T).max()) / scale)
        min_eig = min(min_eig, float(np.linalg.eigvalsh(0.5 * (L + L.T)).min()) / scale)

        # flux reconstruction against the direct formulas
        pt = eval_eos(rho, s, c, model.eos)
        T, mu = float(pt.T), float(pt.mu)
        gradv = rng.uniform(-1, 1, size=(3, 3))
        gradT = rng.uniform(-1, 1, size=3)
        gradmu = rng.uniform(-1, 1, size=3)
        aff_e = -gradT / T ** 2
        aff_m = -gradv / T + np.outer(gradT, v3) / T ** 2
        aff_c = -gradmu / T + mu * gradT / T ** 2
        J_m, J_e, J_c = onsager_fluxes(blocks, aff_e, aff_m, aff_c)
        kap3 = _as3(tr.kappa)
        dmat3 = _as3(tr.dcoef)
        D_m, D_e, D_c = _direct_fluxes(tr.eta, tr.zeta, kap3, dmat3,
                                       T, mu, v3, gradv, gradT, gradmu)
        fs = max(float(np.abs(D_m).max()), float(np.abs(D_e).max()),
                 float(np.abs(D_c).max()), 1.0)
        worst_flux = max(worst_flux,
                         float(np.abs(J_m - D_m).max()) / fs,
                         float(np.abs(J_e - D_e).max()) / fs,
                         float(np.abs(J_c - D_c).max()) / fs)
    passed = worst_sym <= 1e-13 and min_eig >= -1e-12 and worst_flux <= 1e-10
    return SuiteResult("onsager", passed,
                       dict(worst_symmetry=worst_sym, min_eigenvalue=min_eig,
                            worst_flux_residual=worst_flux, trials=n_trials))


def _as3(coef) -> np.ndarray:
    if np.isscalar(coef) or (isinstance(coef, np.ndarray) and coef.ndim == 0):
        return float(coef) * np.eye(3)
    coef = np.asarray(coef, dtype=float)
    out = np.zeros((3, 3))
    out[:coef.shape[0], :coef.shape[1]] = coef
    return out


def production_positivity_suite(seed: int, level: str = "fast") -> SuiteResult:
    """Production >= 0 on random states; entropy-rate cross-path identities."""
    counts = _counts(level)
    grid = Grid(dim=1, n=(16,), length=(1.0,))
    rng = np.random.default_rng(seed)
    min_prod = np.inf
    worst_pair = 0.0
    worst_cross = 0.0
    for trial in range(counts["production"]):
        family = DISSIPATIVE[trial % 3]
        model = model_for(family, grid)
        state = smooth_state(grid, model, seed=int(rng.integers(0, 2 ** 31)),
                             amp=0.15)
        _, prod = entropy_production_rate(state, model)
        min_prod = min(min_prod, prod)
        if trial < counts["crosspath"]:
            Sg = grad_S(state, model)
            Hg = grad_H(state, model)
            rate = Sg.dot(dissipative_rhs(state, model), grid)
            scale = max(abs(prod), 1e-30)
            worst_pair = max(worst_pair, abs(rate - prod) / scale)
            shsh = kn_4bracket(Sg, Hg, Sg, Hg, state, model)
            two = metriplectic_2bracket(Sg, Sg, state, model)
            worst_cross = max(worst_cross, abs(shsh - prod) / scale,
                              abs(two - prod) / scale)
    passed = min_prod >= -1e-14 and worst_pair <= 1e-10 and worst_cross <= 1e-10
    return SuiteResult("production_positivity", passed,
                       dict(min_production=float(min_prod),
                            worst_rate_mismatch=worst_pair,
                            worst_cross_path=worst_cross))


def budgets_suite(seed: int, level: str = "fast") -> SuiteResult:
    """Exact mass / concentration budgets and energy-rate refinement."""
    counts = _counts(level)
    details = {}
    passed = True

    # conserved budgets over a short run, every family
    for family in FAMILIES:
        grid = Grid(dim=1, n=(64,), length=(1.0,))
        model = model_for(family, grid)
        state = smooth_state(grid, model, seed=seed + 11)
        mass0 = grid.integrate(state.rho)
        conc0 = grid.integrate(state.ctilde)
        final = integrate(state, model, dt=1e-4, n_steps=counts["budget_steps"],
                          warn_on_stiff=False)
        dm = abs(grid.integrate(final.rho) - mass0) / abs(mass0)
        dc = abs(grid.integrate(final.ctilde) - conc0) / max(abs(conc0), 1e-3)
        ok = dm <= 1e-12 and dc <= 1e-12
        details[f"{family}:budget"] = dict(mass_drift=float(dm),
                                           conc_drift=float(dc), passed=ok)
        passed = passed and ok

    # instantaneous energy rate under refinement
    for family in FAMILIES:
        residuals = []
        for n in (16, 32, 64):
            grid = Grid(dim=1, n=(n,), length=(1.0,))
            model = model_for(family, grid)
            state = smooth_state(grid, model, seed=seed + 13, kmax=2)
            Hg = grad_H(state, model)
            if family in DISSIPATIVE:
                rhs = dissipative_rhs(state, model)
            else:
                rhs = total_rhs(state, model)
            residuals.append(abs(Hg.dot(rhs, grid))
                             / (Hg.norm(grid) * max(rhs.norm(grid), 1e-30)))
        floor_ok = max(residuals) <= FLOOR
        order = _observed_order(residuals)
        ok = floor_ok or order >= ORDER_MIN
        details[f"{family}:energy_rate"] = dict(
            residuals=residuals, order=None if floor_ok else order, passed=ok)
        passed = passed and ok
    return SuiteResult("budgets", passed, details)


# ------------------------------------------------------------------ driver

_SUITES = {
    "bracket_symmetry": bracket_symmetry_suite,
    "casimir_convergence": casimir_convergence_suite,
    "curvature": curvature_suite,
    "onsager": onsager_suite,
    "production_positivity": production_positivity_suite,
    "budgets": budgets_suite,
}


def verify(seed: int = 1, level: str = "fast") -> dict:
    """Run every suite; returns a JSON-serializable report."""
    _counts(level)  # validate level early
    suites = {}
    all_passed = True
    for name in SUITE_NAMES:
        result = _SUITES[name](seed, level)
        suites[name] = {"passed": bool(result.passed),
                        "details": _jsonable(result.details)}
        all_passed = all_passed and result.passed
    return {"seed": seed, "level": level, "passed": bool(all_passed),
            "suites": suites}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj
