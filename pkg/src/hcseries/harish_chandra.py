"""The basic Harish-Chandra series Phi(z, xi) and its building blocks.

Phi(z, xi) = W(z, xi) / (S(z) S~(xi)) * sum_{alpha in Q+} Gamma_alpha(xi) q^{-alpha(z)}

The expansion variables x_i = q^{-alpha_i(z)} are small when Re alpha_i(z)
is large and negative, so the series is asymptotically free deep in the
negative Weyl chamber.
"""
from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, SingularPointError
from .qseries import QContext, qpoch_inf, w8_7
from .rootdata import InitialDatum
from .series import TruncatedLaurent, _solver


def plane_wave(D: InitialDatum, z, xi):
    """W(z, xi) = q^{(rho - xi, rho~ + w0 z)}."""
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    w0 = D.weyl.mats[D.weyl.longest]
    return D.q ** ((D.rho - xi) @ (D.rho_tilde + w0 @ z))


def _s_product(D, vals, params):
    out = 1.0 + 0j
    for j in range(D.npos):
        Q = D.qa[j] ** 2
        xs = Q / params[j] * D.q ** (-vals[j])
        out *= np.prod(qpoch_inf(xs, QContext(Q)))
    return out


def s_factor(D: InitialDatum, z):
    """S(z): product over positive roots of four q_alpha^2-Pochhammer symbols."""
    return _s_product(D, D.root_values(z), D.aw_table)


def s_tilde(D: InitialDatum, xi):
    """S~(xi), built from the dual AW parameters and alpha~(xi)."""
    return _s_product(D, D.root_values(xi, tilde=True), D.aw_dual_table)


def gamma0(D: InitialDatum, xi):
    """Normalization Gamma_0(xi) = prod_{alpha>0} (q_alpha^2 q^{-2 alpha~(xi)}; q_alpha^2)_inf."""
    vals = D.root_values(xi, tilde=True)
    out = 1.0 + 0j
    for j in range(D.npos):
        Q = D.qa[j] ** 2
        out *= qpoch_inf(Q * D.q ** (-2 * vals[j]), QContext(Q))
    return out


def expansion_variables(D, z):
    return D.q ** (-(D.simple @ np.asarray(z, dtype=complex)))


class HCSeries:
    """Phi(., xi) for a fixed spectral point, truncated at height N."""

    def __init__(self, D: InitialDatum, xi, N=24, guard=None):
        self.D = D
        self.N = int(N)
        self.xi = D.project(np.asarray(xi, dtype=complex))
        self.table = _solver(D, self.N, guard).solve(self.xi)
        self.prefactor_xi = 1.0 / s_tilde(D, self.xi)

    @property
    def gamma(self):
        return self.table.gamma

    def psi(self, z, full_output=False):
        x = expansion_variables(self.D, z)
        return self.table.gamma.evaluate(x, full_output=full_output)

    def __call__(self, z, full_output=False):
        D = self.D
        z = D.project(np.asarray(z, dtype=complex))
        s = s_factor(D, z)
        if abs(s) < 1e-300:
            raise SingularPointError("Phi evaluated at a zero of S(z)")
        val, diag = self.psi(z, full_output=True)
        out = plane_wave(D, z, self.xi) * self.prefactor_xi / s * val
        if full_output:
            return out, {"last_level_max": diag * abs(out / val) if val else diag,
                         "condition": self.table.cond}
        return out


def phi(D, z, xi, N=24):
    """Value of the basic Harish-Chandra series at (z, xi)."""
    return HCSeries(D, xi, N)(z)


def phi_plus(D, z, xi, N=24):
    """Sum of Phi(z, w xi) over w in W0."""
    W = D.weyl
    xi = np.asarray(xi, dtype=complex)
    return sum(HCSeries(D, W.mats[w] @ xi, N)(z) for w in range(len(W)))


def s_inverse_series(D, g):
    """Expansion of 1 / S(z) in x on the grid ``g`` (Euler's formula per factor)."""
    out = TruncatedLaurent.constant(g)
    for j in range(D.npos):
        Q = D.qa[j] ** 2
        for p in D.aw(j):
            out = out * TruncatedLaurent.qpoch(g, D.coords[j], Q / p, Q, inverse=True)
    return out


def gamma_hat(D, xi, N=24):
    """Coefficients of Phi = q^{-(rho + w0 xi, z)} sum Gamma^_alpha q^{-(alpha, z)}.

    Returned as a ``TruncatedLaurent``; Gamma^_alpha is ``.coeff(alpha)``.
    """
    xi = D.project(np.asarray(xi, dtype=complex))
    tab = _solver(D, N).solve(xi)
    p = tab.gamma * s_inverse_series(D, tab.gamma.grid)
    scale = D.q ** (D.rho_tilde @ (D.rho - xi)) / s_tilde(D, xi)
    return p.scale(scale)


# -------------------------------------------------------------------- rank one
def rank_one_data(D, i):
    """(alpha_i index, i*, (a,b,c,d), (a~,b~,c~,d~), mu_i, q_i, kappa row)."""
    j = int(D.simple_index[i])
    istar = D.weyl.istar[i]
    return j, istar, D.aw(j), D.aw_dual(j), D.mu[j], D.qa[j], D.kappa[j]


def wave_rank_one(D, i, x, y):
    """W_i(x, y) = q^{(kappa + kappa_2a - x)(kappa + kappa_a1 - y) / (2 mu_i)}."""
    j = int(D.simple_index[i])
    k, k2, k1, _ = D.kappa[j]
    return D.q ** ((k + k2 - x) * (k + k1 - y) / (2 * D.mu[j]))


def s_rank_one(D, i, x):
    j = int(D.simple_index[i])
    Q = D.qa[j] ** 2
    return np.prod(qpoch_inf(Q / D.aw(j) * D.q ** (-x), QContext(Q)))


def phi_rank_one(D, i, x, xi):
    """Closed form of the rank-one reduction Phi_i(x, xi) through an 8W7 series.

    Valid when |d_i q^{-x}| < 1; otherwise ``ConvergenceError``.
    """
    j, istar, (a, b, c, d), (at, bt, ct, dt), mu, qi, _ = rank_one_data(D, i)
    q = D.q
    Q = qi ** 2
    ctx = QContext(Q)
    xi = np.asarray(xi, dtype=complex)
    y = D.tilde[D.simple_index[istar]] @ xi
    x = complex(x)
    arg = d * q ** (-x)
    if abs(arg) >= 1:
        raise ConvergenceError(f"|d_i q^(-x)| = {abs(arg):.3f} >= 1; continuation not implemented")
    u = q ** (-x - y)
    num = qpoch_inf(np.array([Q * a / at * u, Q * b / at * u, Q * c / at * u, Q * at / d * u, arg]), ctx)
    den = qpoch_inf(Q * Q / d * q ** (-x - 2 * y), ctx)
    ser = w8_7(Q / d * q ** (-x - 2 * y), Q / at * q ** (-y), Q / dt * q ** (-y), bt * q ** (-y),
               ct * q ** (-y), Q / d * q ** (-x), arg, ctx)
    pref = wave_rank_one(D, i, x, y) * gamma0(D, xi) / (s_rank_one(D, i, x) * s_tilde(D, xi))
    return pref * np.prod(num) / den * ser


def askey_wilson_A(D, i, x):
    """A_i(x) of the Askey-Wilson operator M_i."""
    j, _, (a, b, c, d), (at, *_), mu, qi, _ = rank_one_data(D, i)
    t = D.q ** (-complex(x))
    return (1 - a * t) * (1 - b * t) * (1 - c * t) * (1 - d * t) / (at * (1 - t * t) * (1 - qi ** 2 * t * t))


def askey_wilson_apply(D, i, g, x):
    """(M_i g)(x) for a callable g."""
    mu = D.mu[D.simple_index[i]]
    A1, A2 = askey_wilson_A(D, i, x), askey_wilson_A(D, i, -x)
    g0 = g(x)
    return A1 * (g(x - 2 * mu) - g0) + A2 * (g(x + 2 * mu) - g0)


def askey_wilson_eigenvalue(D, i, xi):
    j, istar, _, (at, *_), *_ = rank_one_data(D, i)
    y = D.tilde[D.simple_index[istar]] @ np.asarray(xi, dtype=complex)
    return D.q ** y + D.q ** (-y) - at - 1 / at


def n_operator_apply(D, i, g, x):
    """(N_i g)(x) = B_i(x) g(x - mu_i) + B_i(-x) g(x + mu_i)."""
    j, _, (a, b, *_), _, mu, _, krow = rank_one_data(D, i)
    q = D.q

    def B(t):
        u = q ** (-t)
        return (1 - a * u) * (1 - b * u) / (q ** krow[0] * (1 - u * u))

    return B(x) * g(x - mu) + B(-x) * g(x + mu)


# ---------------------------------------------------------------- checks
def sample_chamber_point(D, rng, lo=-1.8, hi=-0.4, imag=0.5):
    """Random z with Re alpha_i(z) in [lo, hi] for all simple roots (central part for GL)."""
    target = rng.uniform(lo, hi, D.rank) + 1j * rng.uniform(-imag, imag, D.rank)
    z = np.linalg.lstsq(D.simple, target, rcond=None)[0]
    if D.family == "GL":
        z = z + 0.3 * (rng.normal() + 1j * rng.normal()) * np.ones(D.dim)
    return z


def l_apply(D, f, z, full_output=False):
    """(L f)(z) for the explicit second order operator; optionally the term scale."""
    from .operators import l_explicit
    return l_explicit(D).apply(f, z, full_output=full_output)


def eigen_residual(D, z, xi, N=24):
    """|L Phi - E(xi) Phi| at z relative to the summed magnitudes of the terms of L Phi."""
    from .series import eigenvalue
    H = HCSeries(D, xi, N)
    lhs, scale = l_apply(D, H, z, full_output=True)
    rhs = eigenvalue(D, H.xi) * H(z)
    return float(abs(lhs - rhs) / max(scale, abs(rhs), 1e-300))


def duality_residual(D, z, xi, N=24):
    """|Phi(z, xi; D) - Phi(xi, z; D~)| / |Phi(z, xi; D)|."""
    a = phi(D, z, xi, N)
    b = phi(D.dual, xi, z, N)
    return float(abs(a - b) / max(abs(a), 1e-300))


def ba_box(D):
    """Simple-root coordinates of alpha = (1/2) sum_beta l_beta beta, 0 <= l_beta <= -4 kappa_beta / mu_beta."""
    from itertools import product
    from .rootdata import K
    bounds = []
    for j in range(D.npos):
        b = -4 * D.kappa[j, K] / D.mu[j]
        if b < -1e-9 or abs(b - round(b)) > 1e-9:
            raise ValueError("the vanishing box needs kappa_beta in (mu_beta / 4) Z_{<=0}")
        bounds.append(int(round(b)))
    coords = np.asarray(D.coords[: D.npos], dtype=float)
    out = set()
    for ls in product(*(range(b + 1) for b in bounds)):
        v = 0.5 * np.asarray(ls, dtype=float) @ coords
        if np.allclose(v, np.round(v)):
            out.add(tuple(int(x) for x in np.round(v)))
    return out


def gamma_hat_outside_box(D, xi, N=20):
    """max |Gamma^_alpha| / |Gamma^_0| over alpha of height <= N outside ``ba_box``."""
    gh = gamma_hat(D, xi, N)
    box = ba_box(D)
    c0 = abs(gh.coeff(np.zeros(D.rank, dtype=int)))
    worst = 0.0
    for e, c in zip(gh.grid.exps, gh.coeffs):
        if tuple(int(x) for x in e) not in box:
            worst = max(worst, abs(c) / c0)
    return worst


def phi_invariance_residual(D, w, z, xi, N=32):
    """|Phi(w z, w0 w w0 xi) - Phi(z, xi)| / |Phi(z, xi)| (reflectionless multiplicities)."""
    W = D.weyl
    w0 = W.longest
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    u = W.mul[W.mul[w0, w], w0]
    a = phi(D, z, xi, N)
    b = phi(D, W.mats[w] @ z, W.mats[u] @ xi, N)
    return float(abs(a - b) / max(abs(a), 1e-300))
