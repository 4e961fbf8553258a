# %% [markdown]
# # Connection coefficients and the reflectionless regime
#
# The simple connection entries (m_ee, m_off) relate Phi(s_i z, xi) to
# Phi(z, xi) and Phi(z, s_i* xi).  For generic multiplicities both entries
# are nontrivial theta quotients.  When the multiplicities satisfy the
# integrality conditions m_ee vanishes, m_off equals one, and Phi becomes
# invariant under the finite Weyl group.

# %%
import numpy as np

from hcseries import build_datum
from hcseries import connection as cn
from hcseries import harish_chandra as hc

rng = np.random.default_rng(1)
generic = build_datum("B", 2, "t", {"*": 0.21}, 0.3)
refl = build_datum("B", 2, "t", {"long": 0.5, "short": {"alpha": 0.5, "2alpha": 0.0, "alpha1": 0.0, "2alpha1": 0.5}}, 0.3)

# %%
for name, D in (("generic", generic), ("reflectionless", refl)):
    ok, _ = cn.reflectionless_predicate(D)
    z = np.array([-0.3 + 0.1j, -0.5 - 0.2j])
    xi = hc.sample_chamber_point(D.dual, rng)
    mee, moff = cn.m_simple(D, 0, z, xi)
    print(f"{name:15s} predicate={ok!s:5s} |m_ee|={abs(mee):.2e} |m_off - 1|={abs(moff - 1):.2e}")

# %% [markdown]
# ## Connection identity at a point near a wall

# %%
D = generic
xi = np.linalg.lstsq(D.dual.simple, np.array([-1.2 + 0.3j, -0.9 - 0.2j]), rcond=None)[0]
z = np.linalg.lstsq(D.simple, np.array([0.3 + 0.2j, -1.5 - 0.1j]), rcond=None)[0]
for N in (8, 16, 24):
    print(f"N={N:2d}  residual {cn.connection_identity_residual(D, 0, z, xi, N):.2e}")

# %% [markdown]
# ## Weyl group invariance in the reflectionless case

# %%
z = np.linalg.lstsq(refl.simple, np.array([-0.03 + 0.2j, -0.02 - 0.1j]), rcond=None)[0]
xi = hc.sample_chamber_point(refl.dual, rng)
for w in range(1, len(refl.weyl)):
    print(f"w={refl.weyl.reduced_words[w]!s:14s} residual {hc.phi_invariance_residual(refl, w, z, xi, 32):.2e}")
