"""Theta-function connection coefficients of the basic Harish-Chandra series.

The connection matrix M^sigma(z, xi) is indexed by pairs (tau1, tau2) of
Weyl group elements in the enumeration order of ``D.weyl`` and satisfies

    Phi(sigma^{-1} z, tau2^{-1} xi) = sum_{tau1} M^sigma[tau1, tau2] Phi(z, tau1^{-1} xi).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularPointError
from .qseries import QContext, qpoch_inf, theta
from .rootdata import K, InitialDatum
from .settings import resolve_guard


def _guarded(den, guard, what):
    guard = resolve_guard(guard)
    den = np.asarray(den)
    if np.any(np.abs(den) < guard):
        raise SingularPointError(f"theta denominator of {what} below pole guard", where=what,
                                 value=float(np.min(np.abs(den))))


def frak_e(D: InitialDatum, j, x, y, guard=None):
    """The function e_alpha(x, y) for root index ``j`` (vectorized in x, y)."""
    k, k2, k1, _ = D.kappa[j]
    a, b, c, d = D.aw(j)
    at, bt, ct, dt = D.aw_dual(j)
    q, mu = D.q, D.mu[j]
    ctx = QContext(D.qa[j] ** 2)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    qy = q ** y
    num = theta(at * qy, ctx) * theta(bt * qy, ctx) * theta(ct * qy, ctx) * theta(d * q ** (y - x) / at, ctx)
    den = theta(q ** (2 * y), ctx) * theta(d * q ** (-x), ctx)
    _guarded(den, guard, "e_alpha")
    return q ** (-(k + k2 - x) * (k + k1 - y) / (2 * mu)) * num / den


def frak_e_tilde(D: InitialDatum, j, x, y, guard=None):
    """The dual function e~_alpha(x, y)."""
    k, k2, k1, _ = D.kappa[j]
    a, b, c, d = D.aw(j)
    at, bt, ct, dt = D.aw_dual(j)
    q, mu = D.q, D.mu[j]
    ctx = QContext(D.qa[j] ** 2)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    qy = q ** y
    num = theta(a * qy, ctx) * theta(b * qy, ctx) * theta(c * qy, ctx) * theta(dt * q ** (y - x) / a, ctx)
    den = theta(q ** (2 * y), ctx) * theta(dt * q ** (-x), ctx)
    _guarded(den, guard, "e~_alpha")
    return q ** (-(k + k1 - x) * (k + k2 - y) / (2 * mu)) * num / den


def n_pm(D, i, x, y, guard=None):
    """(n_+, n_-) at x = alpha_i(z) and y = alpha~_{i*}(xi)."""
    j = int(D.simple_index[i])
    den = frak_e_tilde(D, j, y, -np.asarray(x), guard)
    _guarded(den, guard, "m^{s_i} denominator")
    plus = (frak_e(D, j, x, y, guard) - frak_e_tilde(D, j, y, x, guard)) / den
    minus = frak_e(D, j, x, -np.asarray(y), guard) / den
    return plus, minus


def m_simple(D: InitialDatum, i, z, xi, guard=None):
    """(m_ee, m_off) = (m^{s_i}_{e,e}(z, xi), m^{s_i}_{s_{i*},e}(z, xi)); i is 0-based.

    ``xi`` may be a stack of points of shape (k, dim).
    """
    istar = D.weyl.istar[i]
    x = D.simple[i] @ np.asarray(z, dtype=complex)
    y = np.asarray(xi, dtype=complex) @ D.tilde[D.simple_index[istar]]
    return n_pm(D, i, x, y, guard)


def m_ultraspherical(D: InitialDatum, i, z, xi):
    """Simplified (m_ee, m_off) valid when (Lambda, alpha_i^vee) = Z = (Lambda~, alpha~_i^vee)."""
    j = int(D.simple_index[i])
    if D.case(j) != "q-ultraspherical":
        raise ValueError("simplified formula requires the q-ultraspherical case")
    istar = D.weyl.istar[i]
    q, mu, qi = D.q, D.mu[j], D.qa[j]
    k = D.kappa[j, K]
    a = D.aw(j)[0]
    ctx = QContext(qi)
    x = D.simple[i] @ np.asarray(z, dtype=complex)
    y = np.asarray(xi, dtype=complex) @ D.tilde[D.simple_index[istar]]
    mee = (q ** ((2 * k - y) * x / mu) * theta(a, ctx) * theta(q ** (y - x), ctx)
           / (theta(q ** y, ctx) * theta(a * q ** (-x), ctx)))
    moff = (q ** (2 * k / mu * (x - y)) * theta(a * q ** (-y), ctx) * theta(q ** (-x), ctx)
            / (theta(a * q ** (-x), ctx) * theta(q ** (-y), ctx)))
    return mee, moff


# ------------------------------------------------------------------ matrices
@dataclass
class ConnectionMatrix:
    sigma: int
    word: tuple
    value: np.ndarray


def simple_matrix(D: InitialDatum, i, z, xi, guard=None):
    """M^{s_i}(z, xi) as a dense |W0| x |W0| array."""
    W = D.weyl
    n = len(W)
    xi = np.asarray(xi, dtype=complex)
    xis = np.array([W.mats[W.inv[t]] @ xi for t in range(n)])        # tau2^{-1} xi
    mee, moff = m_simple(D, i, z, xis, guard)
    M = np.zeros((n, n), dtype=complex)
    sistar = W.simple[W.istar[i]]
    for t2 in range(n):
        M[t2, t2] = mee[t2]
        M[W.mul[t2, sistar], t2] = moff[t2]
    return M


def connection_matrix(D: InitialDatum, sigma, z, xi, word=None, guard=None):
    """M^sigma(z, xi) through the cocycle property along a reduced word."""
    W = D.weyl
    word = tuple(W.reduced_words[sigma] if word is None else word)
    if W.from_word(word) != sigma:
        raise ValueError("word does not represent sigma")
    n = len(W)
    z = np.asarray(z, dtype=complex)
    M = np.eye(n, dtype=complex)
    pt = z.copy()
    for i in word:
        M = M @ simple_matrix(D, i, pt, xi, guard)
        pt = W.mats[W.simple[i]] @ pt
    return ConnectionMatrix(sigma, word, M)


def yb_residual(D: InitialDatum, i, z, xi):
    """Frobenius norm of LHS - RHS of the dynamical Yang-Baxter type equation (0-based i)."""
    W = D.weyl
    s = lambda k: W.mats[W.simple[k]]
    z = np.asarray(z, dtype=complex)
    M = lambda k, p: simple_matrix(D, k, p, xi)
    lhs = M(i, z) @ M(i + 1, s(i) @ z) @ M(i, s(i + 1) @ s(i) @ z)
    rhs = M(i + 1, z) @ M(i, s(i + 1) @ z) @ M(i + 1, s(i) @ s(i + 1) @ z)
    return float(np.linalg.norm(lhs - rhs)), float(np.linalg.norm(lhs))


def reflection_residual(D: InitialDatum, z, xi):
    """Frobenius norm of LHS - RHS of the dynamical reflection type equation."""
    W = D.weyl
    n = D.rank
    a, b = n - 2, n - 1
    s = lambda k: W.mats[W.simple[k]]
    z = np.asarray(z, dtype=complex)
    M = lambda k, p: simple_matrix(D, k, p, xi)
    lhs = M(a, z) @ M(b, s(a) @ z) @ M(a, s(b) @ s(a) @ z) @ M(b, s(a) @ s(b) @ s(a) @ z)
    rhs = M(b, z) @ M(a, s(b) @ z) @ M(b, s(a) @ s(b) @ z) @ M(a, s(b) @ s(a) @ s(b) @ z)
    return float(np.linalg.norm(lhs - rhs)), float(np.linalg.norm(lhs))


# ------------------------------------------------------------------ identities
def connection_identity_residual(D, i, z, xi, N=24):
    """|Phi(s_i z, xi) - m_ee Phi(z, xi) - m_off Phi(z, s_{i*} xi)| / scale."""
    from .harish_chandra import HCSeries
    W = D.weyl
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    sistar = W.mats[W.simple[W.istar[i]]]
    mee, moff = m_simple(D, i, z, xi)
    H1 = HCSeries(D, xi, N)
    H2 = HCSeries(D, sistar @ xi, N)
    lhs = H1(W.mats[W.simple[i]] @ z)
    a, b = H1(z), H2(z)
    scale = max(abs(lhs), abs(mee * a), abs(moff * b))
    return float(abs(lhs - mee * a - moff * b) / scale)


def connection_identity_rank_one(D, i, x, xi):
    """Residual of Phi_i(-x, xi) = n_+ Phi_i(x, xi) + n_- Phi_i(x, s_{i*} xi) via 8W7."""
    from .harish_chandra import phi_rank_one
    W = D.weyl
    xi = np.asarray(xi, dtype=complex)
    istar = W.istar[i]
    y = D.tilde[D.simple_index[istar]] @ xi
    plus, minus = n_pm(D, i, x, y)
    lhs = phi_rank_one(D, i, -x, xi)
    a = phi_rank_one(D, i, x, xi)
    b = phi_rank_one(D, i, x, W.mats[W.simple[istar]] @ xi)
    scale = max(abs(lhs), abs(plus * a), abs(minus * b))
    return float(abs(lhs - plus * a - minus * b) / scale)


# ------------------------------------------------------------------ Wronskian
def aw_weight(D, i, x):
    """Askey-Wilson weight w_i(x) in base Q = q_i^2."""
    j = int(D.simple_index[i])
    Q = D.qa[j] ** 2
    ctx = QContext(Q)
    q = D.q
    x = complex(x)
    num = qpoch_inf(q ** (2 * x), ctx) * qpoch_inf(q ** (-2 * x), ctx)
    den = 1.0 + 0j
    for p in D.aw(j):
        den *= qpoch_inf(p * q ** x, ctx) * qpoch_inf(p * q ** (-x), ctx)
    if abs(den) < resolve_guard():
        raise SingularPointError("pole of the Askey-Wilson weight", where="w_i", value=abs(den))
    return num / den


def wronskian(D, i, f, g, x):
    """[f, g](x) = w_i(x) A_i(x) (f(x - 2mu_i) g(x) - f(x) g(x - 2mu_i))."""
    from .harish_chandra import askey_wilson_A
    mu = D.mu[D.simple_index[i]]
    x = complex(x)
    return aw_weight(D, i, x) * askey_wilson_A(D, i, x) * (f(x - 2 * mu) * g(x) - f(x) * g(x - 2 * mu))


def wronskian_closed_form(D, i, x, xi):
    """Closed form of [Phi_i(., xi), Phi_i(., s_{i*} xi)](x)."""
    from .harish_chandra import gamma0, s_tilde, wave_rank_one
    W = D.weyl
    j = int(D.simple_index[i])
    istar = W.istar[i]
    Q = D.qa[j] ** 2
    ctx = QContext(Q)
    q = D.q
    x = complex(x)
    xi = np.asarray(xi, dtype=complex)
    sxi = W.mats[W.simple[istar]] @ xi
    y = D.tilde[D.simple_index[istar]] @ xi
    den = s_tilde(D, xi) * s_tilde(D, sxi)
    for p in D.aw(j):
        den *= theta(p * q ** x, ctx)
    num = ((q ** (-y) - q ** y) * wave_rank_one(D, i, x, y) * wave_rank_one(D, i, x, -y)
           * gamma0(D, xi) * gamma0(D, sxi) * theta(q ** (2 * x), ctx))
    return num / den


def m_wronskian(D, i, x, xi):
    """(n_+, n_-) from Wronskians of rank-one closed forms (independent oracle)."""
    from .harish_chandra import phi_rank_one
    W = D.weyl
    xi = np.asarray(xi, dtype=complex)
    sxi = W.mats[W.simple[W.istar[i]]] @ xi
    f = lambda t: phi_rank_one(D, i, t, xi)
    g = lambda t: phi_rank_one(D, i, t, sxi)
    fm = lambda t: phi_rank_one(D, i, -t, xi)
    base = wronskian(D, i, f, g, x)
    plus = wronskian(D, i, fm, g, x) / base
    minus = wronskian(D, i, f, fm, x) / wronskian(D, i, f, g, x)
    return plus, minus


# --------------------------------------------------------------- reflectionless
def _in_lattice(v, step, tol):
    r = v / step
    return bool(abs(r - round(r)) < tol)


def reflectionless_predicate(D: InitialDatum, tol=1e-10):
    """Check the integrality conditions under which m_ee vanishes identically.

    Returns ``(ok, certificate)``; the certificate has one entry per root
    orbit listing each condition and, for the degenerate cases, the
    equivalent reduced condition.
    """
    cert = {}
    ok_all = True
    for j in range(D.npos):
        name = D.orbit_names[j] if D.orbit_names else str(j)
        if name in cert:
            continue
        k, k2, k1, k21 = D.kappa[j]
        mu = D.mu[j]
        checks = {}
        for label, a, b in (("k_a", k, k1), ("k_2a", k2, k21), ("k_a;k_2a", k, k2), ("k_a1;k_2a1", k1, k21)):
            checks[f"{label} sum in mu Z"] = _in_lattice(a + b, mu, tol)
            checks[f"{label} difference in mu Z"] = _in_lattice(a - b, mu, tol)
        checks["total in 2mu Z"] = _in_lattice(k + k2 + k1 + k21, 2 * mu, tol)
        ok = all(checks.values())
        case = D.case(j)
        entry = {"case": case, "mu": float(mu), "conditions": checks, "ok": ok}
        if case == "q-ultraspherical":
            entry["reduced"] = {"k_a in (mu/2) Z": _in_lattice(k, mu / 2, tol)}
        elif case == "q-jacobi":
            entry["reduced"] = {"k_a in (mu/2) Z": _in_lattice(k, mu / 2, tol),
                                "k_a1 in (mu/2) Z": _in_lattice(k1, mu / 2, tol),
                                "k_2a in (mu/2) Z": _in_lattice(k2, mu / 2, tol),
                                "k_a + k_a1 in mu Z": _in_lattice(k + k1, mu, tol),
                                "k_a + k_2a in mu Z": _in_lattice(k + k2, mu, tol)}
        ok_all &= ok
        cert[name] = entry
    return ok_all, cert
