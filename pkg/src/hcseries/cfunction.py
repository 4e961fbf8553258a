"""Quantum c-functions, Xi-functions and the higher rank theta addition formula.

For Xi meromorphic in (z, xi) put

    c_Xi(z, xi) = Xi(z, xi) / W(z, xi) * prod_{alpha > 0} theta(a~ q^{alpha~(xi)}, ..., d~ q^{alpha~(xi)}; q_alpha^2)
                                                       / theta(q^{2 alpha~(xi)}; q_alpha^2).

c_Xi is Lambda~ x Lambda periodic exactly when Xi is quasi-invariant; the
spherical c-function is c_Xi for Xi = Xi_sph built from lattice theta
functions.  Residual helpers return relative errors.
"""
from __future__ import annotations

import numpy as np

from .connection import m_simple
from .errors import DatumError, HCError
from .harish_chandra import plane_wave
from .qseries import QContext, lattice_theta, theta
from .rootdata import K, K1, K2, K21, InitialDatum


def delta_s_vee(D: InitialDatum):
    """Half the sum of the coroots of the positive short roots (all roots if simply laced)."""
    return D.delta_s_vee


def require_twisted_equal_lattice(D):
    if D.bullet != "t" or not np.allclose(D.lam, D.lam_tilde):
        raise DatumError("the spherical c-function needs a twisted datum with equal lattices")


def theta_lattice(D, x):
    """Lattice theta function of Lambda at x."""
    return lattice_theta(D.lam, x, D.q)


def _theta_factor(D, xi):
    """prod_{alpha > 0} theta(a~, b~, c~, d~ times q^{alpha~(xi)}; q_alpha^2) / theta(q^{2 alpha~(xi)}; q_alpha^2)."""
    vals = D.root_values(xi, tilde=True)
    out = 1.0 + 0j
    for j in range(D.npos):
        ctx = QContext(D.qa[j] ** 2)
        u = D.q ** vals[j]
        out *= np.prod(theta(D.aw_dual(j) * u, ctx)) / theta(u * u, ctx)
    return out


def c_xi(D, Xi, z, xi):
    """c_Xi(z, xi) for a callable ``Xi``."""
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    return Xi(z, xi) / plane_wave(D, z, xi) * _theta_factor(D, xi)


def _sph_shifts(D):
    psi = D.psi
    k0, k2a0, k2psi = D.kappa[psi, K1], D.kappa[psi, K21], D.kappa[psi, K2]
    ds = D.delta_s_vee
    return (k2a0 - k0) * ds, (k2a0 - k2psi) * ds


def xi_sph(D: InitialDatum, z, xi):
    """Xi_sph(z, xi) = th(rho + e + z + w0 xi) / (th(e + z) th(e' - xi)) with th the lattice theta."""
    require_twisted_equal_lattice(D)
    e, ep = _sph_shifts(D)
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    w0 = D.weyl.mats[D.weyl.longest]
    return theta_lattice(D, D.rho + e + z + w0 @ xi) / (theta_lattice(D, e + z) * theta_lattice(D, ep - xi))


def c_sph(D: InitialDatum, z, xi):
    """The spherical quantum c-function (general branch)."""
    return c_xi(D, lambda a, b: xi_sph(D, a, b), z, xi)


def all_integral(D):
    """True when (Lambda, alpha^vee) = Z for every root."""
    return all(D.lattice_parity("lam")[j] == 1 for j in range(D.nroots))


def c_sph_integral(D: InitialDatum, z, xi):
    """The simplified expression valid when (Lambda, alpha^vee) = Z for all roots."""
    require_twisted_equal_lattice(D)
    if not all_integral(D):
        raise DatumError("simplified c-function needs (Lambda, alpha^vee) = Z for all roots")
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    w0 = D.weyl.mats[D.weyl.longest]
    val = theta_lattice(D, D.rho + z + w0 @ xi) / (theta_lattice(D, z) * theta_lattice(D, xi))
    vals = D.roots[: D.npos] @ xi
    for j in range(D.npos):
        ctx = QContext(D.qa[j])
        val *= theta(D.q ** (2 * D.kappa[j, K] + vals[j]), ctx) / theta(D.q ** vals[j], ctx)
    return val / plane_wave(D, z, xi)


# ----------------------------------------------------------- quasi-invariance
def quasiinvariance_residual(D, Xi, z, xi):
    """Largest relative defect of the two quasi-invariance laws over lattice generators."""
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    w0 = D.weyl.mats[D.weyl.longest]
    base = Xi(z, xi)
    worst = 0.0
    for mu in D.lam_tilde:
        rhs = D.q ** ((D.rho - xi) @ (w0 @ mu)) * base
        worst = max(worst, abs(Xi(z + mu, xi) - rhs) / max(abs(rhs), 1e-300))
    for lam in D.lam:
        rhs = D.q ** (lam @ (D.rho_tilde - w0 @ z)) * base
        worst = max(worst, abs(Xi(z, xi + lam) - rhs) / max(abs(rhs), 1e-300))
    return float(worst)


class XiFunction:
    """A Xi evaluator whose quasi-invariance is validated on construction."""

    def __init__(self, D, func, probes=None, tol=1e-8, rng=None):
        self.D = D
        self.func = func
        rng = rng or np.random.default_rng(0)
        if probes is None:
            probes = [(0.3 * rng.normal(size=D.dim) + 0.2j * rng.normal(size=D.dim),
                       0.3 * rng.normal(size=D.dim) + 0.2j * rng.normal(size=D.dim)) for _ in range(2)]
        self.defect = max(quasiinvariance_residual(D, func, D.project(a), D.project(b)) for a, b in probes)
        if self.defect > tol:
            raise HCError(f"Xi violates quasi-invariance (defect {self.defect:.2e})")

    def __call__(self, z, xi):
        return self.func(np.asarray(z, dtype=complex), np.asarray(xi, dtype=complex))

    def c(self, z, xi):
        return c_xi(self.D, self, z, xi)


def periodic_factor(D, vec, s1=0.21, s2=0.47):
    """A Lambda~-periodic, non-invariant function of z used as a negative control."""
    q = D.q
    vec = np.asarray(vec, dtype=float)

    def g(z):
        x = q ** (vec @ z)
        return q ** ((s1 - s2) * (vec @ z)) * theta(q ** s1 * x, q) / theta(q ** s2 * x, q)

    return g


# ------------------------------------------------------------------ residuals
def consistency_residual(D, c, i, z, xi):
    """c(z,xi) - m_ee(z,xi) c(s_i z, xi) - m_off(z, s_{i*} xi) c(s_i z, s_{i*} xi), relative."""
    W = D.weyl
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    si = W.mats[W.simple[i]]
    sis = W.mats[W.simple[W.istar[i]]]
    mee, _ = m_simple(D, i, z, xi)
    _, moff = m_simple(D, i, z, sis @ xi)
    lhs = c(z, xi)
    t1 = mee * c(si @ z, xi)
    t2 = moff * c(si @ z, sis @ xi)
    return float(abs(lhs - t1 - t2) / max(abs(lhs), abs(t1), abs(t2), 1e-300))


def _simple_data(D, i, z, xi):
    j = int(D.simple_index[i])
    istar = D.weyl.istar[i]
    x = D.simple[i] @ np.asarray(z, dtype=complex)
    y = D.tilde[D.simple_index[istar]] @ np.asarray(xi, dtype=complex)
    return j, x, y


def addition_root_residual(D: InitialDatum, i, z, xi):
    """Three-term identity between lattice theta functions at s_i-related points."""
    require_twisted_equal_lattice(D)
    j, x, y = _simple_data(D, i, z, xi)
    if D.lattice_parity("lam")[j] != 1:
        raise DatumError("the addition formula needs (Lambda, alpha_i^vee) = Z")
    q, k = D.q, D.kappa[j, K]
    ctx = QContext(D.qa[j])
    W = D.weyl
    si = W.mats[W.simple[i]]
    w0 = W.mats[W.longest]
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    th = lambda v: theta_lattice(D, v)
    lhs = theta(q ** y, ctx) * theta(q ** (2 * k - x), ctx) * th(D.rho + z + w0 @ xi)
    t1 = theta(q ** (2 * k), ctx) * theta(q ** (y - x), ctx) * th(D.rho + si @ z + w0 @ xi)
    t2 = q ** y * theta(q ** (2 * k - y), ctx) * theta(q ** (-x), ctx) * th(si @ D.rho + z + w0 @ xi)
    return float(abs(lhs - t1 + t2) / max(abs(lhs), abs(t1), abs(t2), 1e-300))


def three_term_residual(D, Xi, i, z, xi):
    """Three-term form of the consistency equations for c_Xi in the q-ultraspherical case."""
    j, x, y = _simple_data(D, i, z, xi)
    if D.case(j) != "q-ultraspherical":
        raise DatumError("the reformulation needs the q-ultraspherical case")
    q, k = D.q, D.kappa[j, K]
    ctx = QContext(D.qa[j])
    W = D.weyl
    si = W.mats[W.simple[i]]
    sis = W.mats[W.simple[W.istar[i]]]
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    lhs = theta(q ** y, ctx) * theta(q ** (2 * k - x), ctx) * Xi(z, xi)
    t1 = theta(q ** (2 * k), ctx) * theta(q ** (y - x), ctx) * Xi(si @ z, xi)
    t2 = q ** y * theta(q ** (2 * k - y), ctx) * theta(q ** (-x), ctx) * Xi(si @ z, sis @ xi)
    return float(abs(lhs - t1 + t2) / max(abs(lhs), abs(t1), abs(t2), 1e-300))


def reflection_laws_residual(D, Xi, i, z, xi):
    """Largest relative defect of the two separate reflection laws for Xi."""
    j, x, y = _simple_data(D, i, z, xi)
    a, _, _, d = D.aw(j)
    dt = D.aw_dual(j)[3]
    q = D.q
    ctx = QContext(D.qa[j] ** 2)
    W = D.weyl
    si = W.mats[W.simple[i]]
    sis = W.mats[W.simple[W.istar[i]]]
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    th = lambda *args: np.prod([theta(v, ctx) for v in args])
    r = dt / a
    base = Xi(z, xi)
    f1 = th(r * q ** (y + x), d * q ** (-x)) / th(r * q ** (y - x), d * q ** x)
    f2 = th(r * q ** (-y - x), dt * q ** y) / th(r * q ** (y - x), dt * q ** (-y))
    e1 = abs(Xi(si @ z, xi) - f1 * base) / max(abs(f1 * base), 1e-300)
    e2 = abs(Xi(z, sis @ xi) - f2 * base) / max(abs(f2 * base), 1e-300)
    return float(max(e1, e2))
