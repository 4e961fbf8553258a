# %% [markdown]
# # Truncation and convergence of the series
#
# The series Phi(z, xi) is computed from its coefficients up to height N.
# This script shows how the eigenvalue residual and the gap to the rank-one
# closed form shrink as N grows, and how the convergence speed depends on
# how deep z sits in the negative chamber.

# %%
import numpy as np

from hcseries import build_datum
from hcseries import harish_chandra as hc

rng = np.random.default_rng(0)
kappa = {"long": 0.37, "short": {"alpha": 0.33, "2alpha": 0.27, "alpha1": 0.21, "2alpha1": 0.18}}
D = build_datum("B", 2, "t", kappa, 0.3)
print(D)

# %% [markdown]
# ## Eigenvalue residual against truncation height

# %%
pts = [(hc.sample_chamber_point(D, rng), hc.sample_chamber_point(D.dual, rng)) for _ in range(3)]
for N in (4, 8, 12, 16, 20, 24):
    res = [hc.eigen_residual(D, z, xi, N) for z, xi in pts]
    print(f"N={N:2d}  worst residual {max(res):.2e}")

# %% [markdown]
# ## Depth in the chamber
#
# The expansion variables are q^{-alpha_i(z)}; shallow points converge slowly.

# %%
xi = hc.sample_chamber_point(D.dual, rng)
for depth in (0.2, 0.5, 1.0, 2.0):
    z = np.linalg.lstsq(D.simple, -depth * np.ones(2, dtype=complex), rcond=None)[0]
    vals = [hc.phi(D, z, xi, N) for N in (8, 16, 24)]
    print(f"depth {depth:3.1f}  |Phi_16 - Phi_8| {abs(vals[1] - vals[0]):.1e}  |Phi_24 - Phi_16| {abs(vals[2] - vals[1]):.1e}")

# %% [markdown]
# ## Rank one: series against the 8W7 closed form

# %%
B1 = build_datum("B", 1, "t", {"short": kappa["short"]}, 0.3)
xi = hc.sample_chamber_point(B1.dual, rng)
z = hc.sample_chamber_point(B1, rng)
exact = hc.phi_rank_one(B1, 0, B1.simple[0] @ z, xi)
for N in (5, 10, 20, 30):
    print(f"N={N:2d}  relative error {abs(hc.phi(B1, z, xi, N) - exact) / abs(exact):.2e}")
