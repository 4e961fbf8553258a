"""q-Pochhammer symbols, Jacobi theta functions and basic hypergeometric series.

All functions work in complex double precision and accept numpy arrays
for the argument ``x`` where that is natural.  Infinite products are cut
once the remaining factors differ from one by less than ``factor_cutoff``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import settings
from .errors import ConvergenceError, SingularPointError


@dataclass(frozen=True)
class QContext:
    """Truncation policy for q-series evaluation."""

    q: float
    factor_cutoff: float = field(default_factory=lambda: settings.get("factor_cutoff"))
    max_terms: int = 20000

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie in (0,1), got {self.q}")


def _ctx(q):
    return q if isinstance(q, QContext) else QContext(float(q))


def n_factors(xmax, ctx):
    """Number of factors N with xmax * q^N / (1-q) below the cutoff."""
    q = ctx.q
    bound = ctx.factor_cutoff * (1.0 - q)
    if xmax <= bound:
        return 0
    n = int(np.ceil(np.log(bound / xmax) / np.log(q)))
    if n > ctx.max_terms:
        raise ConvergenceError(f"q-Pochhammer needs {n} factors (> max_terms)")
    return max(n, 0)


def qpoch_inf(x, q):
    """(x; q)_infinity, vectorized over ``x``."""
    ctx = _ctx(q)
    x = np.asarray(x, dtype=complex)
    if x.size == 0:
        return x.copy()
    n = n_factors(float(np.max(np.abs(x))), ctx)
    if n == 0:
        return np.ones_like(x)
    qs = ctx.q ** np.arange(n)
    out = np.prod(1.0 - x[..., None] * qs, axis=-1)
    return out if out.ndim else complex(out)


def qpoch_fin(x, k, q):
    """(x; q)_k for integer k >= 0."""
    ctx = _ctx(q)
    if k < 0:
        raise ValueError("k must be nonnegative")
    x = np.asarray(x, dtype=complex)
    if k == 0:
        return np.ones_like(x) if x.ndim else 1.0 + 0j
    out = np.prod(1.0 - x[..., None] * ctx.q ** np.arange(k), axis=-1)
    return out if out.ndim else complex(out)


def qpoch_multi(xs, q):
    """(x_1, ..., x_m; q)_infinity as the product of single symbols."""
    ctx = _ctx(q)
    out = 1.0 + 0j
    for x in xs:
        out = out * qpoch_inf(x, ctx)
    return out


def theta(x, q):
    """Normalized Jacobi theta function theta(x; q) = (x, q/x; q)_infinity."""
    ctx = _ctx(q)
    x = np.asarray(x, dtype=complex)
    if np.any(x == 0):
        raise SingularPointError("theta(x; q) is undefined at x = 0")
    out = qpoch_inf(x, ctx) * qpoch_inf(ctx.q / x, ctx)
    return out


def theta_multi(xs, q):
    """theta(x_1, ..., x_m; q)."""
    ctx = _ctx(q)
    out = 1.0 + 0j
    for x in xs:
        out = out * theta(x, ctx)
    return out


def lattice_theta(gens, z, q, full_output=False, min_radius=2, max_radius=60):
    """Gaussian lattice sum sum_{lam} q^{|lam|^2/2 + (lam, z)}.

    ``gens`` are the rows of a lattice basis.  Coefficient boxes of growing
    radius are summed until the outermost shell is negligible relative to the
    total.  With ``full_output`` the tail estimate (largest shell term) and
    radius used are returned as well.
    """
    ctx = _ctx(q)
    gens = np.asarray(gens, dtype=float)
    z = np.asarray(z, dtype=complex)
    k = gens.shape[0]
    gram = gens @ gens.T
    # centre of the Gaussian in coefficient space
    centre = -np.linalg.solve(gram, gens @ z.real) if k else np.zeros(0)
    r_needed = int(np.ceil(np.max(np.abs(centre)))) + min_radius if k else 0
    logq = np.log(ctx.q)
    total = 0j
    tail = 0.0
    for radius in range(0, max_radius + 1):
        shell = [c for c in product(range(-radius, radius + 1), repeat=k)
                 if max((abs(t) for t in c), default=0) == radius]
        c = np.array(shell, dtype=float).reshape(len(shell), k)
        lam = c @ gens
        expo = 0.5 * np.einsum("ij,ij->i", lam, lam) + lam @ z
        terms = np.exp(expo * logq)
        s = terms.sum()
        total += s
        tail = float(np.max(np.abs(terms))) if len(terms) else 0.0
        if radius >= r_needed and tail < ctx.factor_cutoff * max(abs(total), 1e-300):
            break
    else:
        raise ConvergenceError("lattice theta did not converge within max_radius")
    if full_output:
        return total, tail, radius
    return total


def phi_series(uppers, lowers, z, q, max_terms=None):
    """The r+1 phi r basic hypergeometric series (|z| < 1 or terminating)."""
    ctx = _ctx(q)
    qq = ctx.q
    uppers = [complex(a) for a in uppers]
    lowers = [complex(b) for b in lowers]
    if len(uppers) != len(lowers) + 1:
        raise ValueError("need r+1 upper and r lower parameters")
    z = complex(z)
    cap = max_terms or ctx.max_terms
    term = 1.0 + 0j
    total = term
    for j in range(cap):
        qj = qq ** j
        facs = [1 - a * qj for a in uppers]
        if min(abs(f) for f in facs) < 1e-13:
            return total
        num = np.prod(facs) * z
        dens = [1 - qq ** (j + 1)] + [1 - b * qj for b in lowers]
        if any(abs(d) < 1e-300 for d in dens):
            raise SingularPointError(f"lower parameter pole at term {j + 1}")
        ratio = num / np.prod(dens)
        term = term * ratio
        total += term
        # once q^j is tiny the ratio settles near z; bound the geometric tail
        rho = abs(ratio)
        if qj < 1e-3 and rho < 1:
            if abs(term) * rho / (1 - rho) < ctx.factor_cutoff * abs(total):
                return total
        elif qj < 1e-3 and abs(z) >= 1:
            raise ConvergenceError("non-terminating series with |z| >= 1")
    raise ConvergenceError("phi series did not converge within max_terms")


def w8_7(a0, a1, a2, a3, a4, a5, z, q, max_terms=None):
    """Very-well-poised 8W7(a0; a1..a5; q, z), direct summation for |z| < 1.

    Terminating series (some a_j = q^{-m}) are summed exactly.
    """
    ctx = _ctx(q)
    qq = ctx.q
    a = [complex(a0), complex(a1), complex(a2), complex(a3), complex(a4), complex(a5)]
    z = complex(z)
    if abs(1 - a[0]) < 1e-300:
        raise SingularPointError("8W7 with a0 = 1")
    cap = max_terms or ctx.max_terms
    total = 1.0 + 0j
    pref = 1.0 + 0j   # z^r prod (a_j)_r / (q a0 / a_j)_r
    for r in range(cap):
        qr = qq ** r
        facs = [1 - aj * qr for aj in a]
        if min(abs(f) for f in facs) < 1e-13:
            return total
        num = np.prod(facs)
        den = np.prod([1 - qq * a[0] / aj * qr for aj in a])
        if abs(den) < 1e-300:
            raise SingularPointError(f"8W7 denominator vanishes at term {r + 1}")
        pref = pref * num / den * z
        term = pref * (1 - a[0] * qq ** (2 * r + 2)) / (1 - a[0])
        total += term
        rho = abs(num / den * z)
        if qr < 1e-3:
            if rho >= 1:
                raise ConvergenceError("8W7 evaluated outside |z| < 1")
            if abs(term) * rho / (1 - rho) < ctx.factor_cutoff * abs(total):
                return total
    raise ConvergenceError("8W7 did not converge within max_terms")


# ------------------------------------------------------------ identity residuals
def fe_residual(x, r, q):
    """Relative residual of theta(q^r x; q) = (-q^{-1/2} x)^{-r} q^{-r^2/2} theta(x; q)."""
    ctx = _ctx(q)
    qq = ctx.q
    lhs = theta(qq ** r * x, ctx)
    rhs = (-(qq ** -0.5) * x) ** (-r) * qq ** (-r * r / 2) * theta(x, ctx)
    return float(abs(lhs - rhs) / max(abs(rhs), abs(lhs), 1e-300))


def rid_residual(x, lam, mu, nu, q):
    """Relative residual of the three-term addition formula for theta functions."""
    ctx = _ctx(q)
    t1 = theta_multi([x * lam, x / lam, mu * nu, mu / nu], ctx)
    t2 = theta_multi([x * nu, x / nu, lam * mu, mu / lam], ctx)
    t3 = mu / lam * theta_multi([x * mu, x / mu, lam * nu, lam / nu], ctx)
    return float(abs(t1 - t2 - t3) / max(abs(t1), abs(t2), abs(t3), 1e-300))


def triple_product_residual(z, q):
    """Lattice theta of Z^n against (q; q)^n prod_j theta(-q^{1/2 + z_j}; q)."""
    ctx = _ctx(q)
    z = np.asarray(z, dtype=complex)
    n = len(z)
    lhs = lattice_theta(np.eye(n), z, ctx)
    rhs = qpoch_inf(ctx.q, ctx) ** n * np.prod([theta(-ctx.q ** (0.5 + zj), ctx) for zj in z])
    return float(abs(lhs - rhs) / max(abs(rhs), 1e-300))
