"""Numerical sanity tour of the bracket structure, one family at a time.

For each model family this prints, on a random smooth state:

  dH/dt (dissipative part)   -- should be ~0 (energy-conserving friction)
  dS/dt (ideal part)         -- should be ~0 (entropy is a Casimir)
  dS/dt (dissipative part)   -- should equal the production integral
  antisymmetry / symmetry residuals of the two brackets

No plotting, just numbers; every quantity here is also pinned down by the
test suite, this script exists so you can see the magnitudes yourself.
"""

import numpy as np

from metriflow import (FAMILIES, Grid, dissipative_rhs, entropy_production_rate,
                       grad_H, grad_S, ideal_rhs, kn_4bracket, poisson_bracket,
                       smooth_state)
from metriflow.fields import random_gradient
from metriflow.verification import model_for

grid = Grid(dim=1, n=(48,), length=(1.0,))
rng = np.random.default_rng(0)

for family in FAMILIES:
    model = model_for(family, grid)
    state = smooth_state(grid, model, seed=11)
    Hg = grad_H(state, model)
    Sg = grad_S(state, model)
    F = random_gradient(grid, 100)
    G = random_gradient(grid, 101)

    anti = poisson_bracket(F, G, state, model) \
        + poisson_bracket(G, F, state, model)
    dS_ideal = Sg.dot(ideal_rhs(state, model), grid)

    print(f"--- {family} ---")
    print(f"  {{F,G}} + {{G,F}}          = {anti: .3e}")
    print(f"  dS/dt | ideal          = {dS_ideal: .3e}")
    if model.is_dissipative:
        diss = dissipative_rhs(state, model)
        _, prod = entropy_production_rate(state, model)
        sym = kn_4bracket(F, G, G, F, state, model) \
            - kn_4bracket(G, F, F, G, state, model)
        print(f"  dH/dt | dissipative    = {Hg.dot(diss, grid): .3e}")
        print(f"  dS/dt - production     = {Sg.dot(diss, grid) - prod: .3e}")
        print(f"  production integral    = {prod: .6e}  (>= 0)")
        print(f"  4-bracket self-residual= {sym: .3e}")
