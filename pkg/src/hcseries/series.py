"""Truncated power series in x_i = q^{-alpha_i(z)} and the Gamma recurrence.

A series is stored densely on a ``MonomialGrid``: all exponent vectors in
Z_{>=0}^n of height (coordinate sum) at most N, ordered by height.
Products use precomputed index triples (i, j, k) with e_i + e_j = e_k, so
every operation is graded: output at height h only sees inputs at heights
<= h.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd

import numpy as np

from .errors import ResonanceError, SingularPointError
from .rootdata import InitialDatum
from .settings import resolve_guard


class MonomialGrid:
    """Exponents of height <= N in n variables, sorted by height."""

    def __init__(self, n, N):
        self.n, self.N = int(n), int(N)
        exps = [e for e in product(range(N + 1), repeat=n) if sum(e) <= N]
        exps.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
        self.exps = np.array(exps, dtype=int).reshape(len(exps), n)
        self.height = self.exps.sum(axis=1)
        self.size = len(exps)
        self.index = {e: i for i, e in enumerate(exps)}
        self.level_start = np.searchsorted(self.height, np.arange(N + 2))
        self._triples = None

    @property
    def triples(self):
        """(i, j, k) with exps[i] + exps[j] = exps[k], sorted by height of k."""
        if self._triples is None:
            ii, jj, kk = [], [], []
            for k, e in enumerate(self.exps):
                for a in product(*(range(x + 1) for x in e)):
                    ii.append(self.index[a])
                    jj.append(self.index[tuple(e - np.array(a))])
                    kk.append(k)
            ii, jj, kk = (np.array(v, dtype=np.int64) for v in (ii, jj, kk))
            order = np.argsort(self.height[kk], kind="stable")
            ii, jj, kk = ii[order], jj[order], kk[order]
            bounds = np.searchsorted(self.height[kk], np.arange(self.N + 2))
            self._triples = (ii, jj, kk, bounds)
        return self._triples

    def shift_index(self, gamma):
        """For each monomial e, index of e + gamma (or -1 if beyond N)."""
        g = tuple(int(x) for x in gamma)
        out = np.full(self.size, -1, dtype=np.int64)
        for i, e in enumerate(self.exps):
            t = tuple(int(a + b) for a, b in zip(e, g))
            j = self.index.get(t)
            if j is not None:
                out[i] = j
        return out

    def monomials(self, x):
        """Values x^e for all grid exponents."""
        x = np.asarray(x, dtype=complex)
        pw = x[None, :] ** self.exps
        return np.prod(pw, axis=1)


@lru_cache(maxsize=32)
def grid(n, N):
    return MonomialGrid(n, N)


def _bincount_c(idx, w, size):
    return (np.bincount(idx, weights=w.real, minlength=size)
            + 1j * np.bincount(idx, weights=w.imag, minlength=size))


@dataclass
class TruncatedLaurent:
    """x^offset * sum_e coeffs[e] x^e, truncated at height N."""

    grid: MonomialGrid
    coeffs: np.ndarray
    offset: np.ndarray = field(default=None)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.offset is None:
            self.offset = np.zeros(self.grid.n, dtype=int)
        self.offset = np.asarray(self.offset, dtype=int)

    # constructors
    @classmethod
    def constant(cls, g, c=1.0):
        a = np.zeros(g.size, dtype=complex)
        a[0] = c
        return cls(g, a)

    @classmethod
    def monomial(cls, g, gamma, c=1.0):
        a = np.zeros(g.size, dtype=complex)
        key = tuple(int(x) for x in gamma)
        if key in g.index:
            a[g.index[key]] = c
        return cls(g, a)

    @classmethod
    def binomial(cls, g, gamma, c):
        """1 - c x^gamma."""
        return cls.constant(g) - cls.monomial(g, gamma, c)

    @classmethod
    def geometric(cls, g, gamma, c):
        """1 / (1 - c x^gamma)."""
        a = np.zeros(g.size, dtype=complex)
        h = int(np.sum(gamma))
        for k in range(g.N // max(h, 1) + 1):
            key = tuple(int(k * x) for x in gamma)
            if key in g.index:
                a[g.index[key]] = c ** k
        return cls(g, a)

    @classmethod
    def qpoch(cls, g, gamma, c, Q, inverse=False):
        """(c x^gamma; Q)_infinity or its reciprocal, via Euler's expansions."""
        a = np.zeros(g.size, dtype=complex)
        h = int(np.sum(gamma))
        qq = 1.0 + 0j
        for k in range(g.N // max(h, 1) + 1):
            key = tuple(int(k * x) for x in gamma)
            if k > 0:
                qq *= 1 - Q ** k
            if key in g.index:
                if inverse:
                    a[g.index[key]] = c ** k / qq
                else:
                    a[g.index[key]] = (-1) ** k * Q ** (k * (k - 1) / 2) * c ** k / qq
        return cls(g, a)

    # arithmetic
    def _check(self, other):
        if other.grid is not self.grid:
            raise ValueError("series live on different grids")

    def __add__(self, other):
        if not isinstance(other, TruncatedLaurent):
            return TruncatedLaurent(self.grid, self.coeffs + np.eye(1, self.grid.size)[0] * other, self.offset)
        self._check(other)
        if not np.array_equal(self.offset, other.offset):
            d = other.offset - self.offset
            if np.all(d >= 0):
                return self + TruncatedLaurent(self.grid, other.shifted(d).coeffs, self.offset)
            if np.all(d <= 0):
                return other + self
            raise ValueError("offsets are not comparable")
        return TruncatedLaurent(self.grid, self.coeffs + other.coeffs, self.offset)

    def __neg__(self):
        return TruncatedLaurent(self.grid, -self.coeffs, self.offset)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return TruncatedLaurent(self.grid, self.coeffs * c, self.offset)

    def shifted(self, gamma):
        """Multiply by x^gamma (gamma >= 0) keeping the offset."""
        idx = self.grid.shift_index(gamma)
        out = np.zeros(self.grid.size, dtype=complex)
        ok = idx >= 0
        out[idx[ok]] = self.coeffs[ok]
        return TruncatedLaurent(self.grid, out, self.offset)

    def __mul__(self, other):
        if not isinstance(other, TruncatedLaurent):
            return self.scale(other)
        self._check(other)
        ii, jj, kk, _ = self.grid.triples
        c = _bincount_c(kk, self.coeffs[ii] * other.coeffs[jj], self.grid.size)
        return TruncatedLaurent(self.grid, c, self.offset + other.offset)

    __rmul__ = __mul__

    def invert(self):
        c0 = self.coeffs[0]
        if abs(c0) == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        g = self.grid
        ii, jj, kk, bounds = g.triples
        out = np.zeros(g.size, dtype=complex)
        out[0] = 1.0 / c0
        for h in range(1, g.N + 1):
            s = slice(bounds[h], bounds[h + 1])
            i, j, k = ii[s], jj[s], kk[s]
            m = i != 0
            acc = _bincount_c(k[m], self.coeffs[i[m]] * out[j[m]], g.size)
            lo, hi = g.level_start[h], g.level_start[h + 1]
            out[lo:hi] = -acc[lo:hi] / c0
        return TruncatedLaurent(g, out, -self.offset)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedLaurent):
            return self.scale(1.0 / other)
        return self * other.invert()

    def shift_var(self, pairings, q):
        """Effect of z -> z + mu where ``pairings[i] = alpha_i(mu)``."""
        pairings = np.asarray(pairings, dtype=complex)
        f = q ** (-(self.grid.exps @ pairings))
        return TruncatedLaurent(self.grid, self.coeffs * f * q ** (-(self.offset @ pairings)), self.offset)

    def evaluate(self, x, full_output=False):
        """Value at x (vector of the n variables)."""
        mon = self.grid.monomials(x)
        terms = self.coeffs * mon
        val = terms.sum() * np.prod(np.asarray(x, dtype=complex) ** self.offset)
        if full_output:
            return val, float(np.max(np.abs(terms[self.grid.level_start[self.grid.N]:]), initial=0.0))
        return val

    def truncate(self, N):
        """Restrict to height <= N on the smaller grid."""
        g = grid(self.grid.n, N)
        return TruncatedLaurent(g, self.coeffs[: g.size].copy(), self.offset)

    def coeff(self, e):
        return self.coeffs[self.grid.index[tuple(int(x) for x in e)]]


# ----------------------------------------------------------------- A(w^{-1} z)
def _factor(g, D, root_vec, C, power):
    """Series of (1 - C q^{beta(z)})^power with beta given as a vector.

    Returns (constant, offset, series) with the convention x^e = q^{-e(z)}.
    """
    coords = np.rint(np.asarray(root_vec) @ np.linalg.pinv(D.simple)).astype(int)
    if np.all(coords <= 0):       # q^{beta(z)} = x^{-beta}, already small
        s = TruncatedLaurent.binomial(g, -coords, C) if power > 0 else TruncatedLaurent.geometric(g, -coords, C)
        return 1.0 + 0j, np.zeros(g.n, dtype=int), s
    # 1 - C x^{-b} = -C x^{-b} (1 - C^{-1} x^{b})
    s = TruncatedLaurent.binomial(g, coords, 1.0 / C) if power > 0 else TruncatedLaurent.geometric(g, coords, 1.0 / C)
    return (-C) ** power, -power * coords, s


def a_factors(D):
    """The factors of A(z) as (root index, multiplier of root, constant, power)."""
    psi = D.psi
    out = []
    for p in D.aw(psi):
        out.append((psi, 1, p, 1))
    out.append((psi, 2, 1.0, -1))
    out.append((psi, 2, D.qa[psi] ** 2, -1))
    for j in range(D.npos):
        if abs(D.psi_tilde @ D.tilde_coroots[j] - 1) < 1e-9:
            a, b = D.aw(j)[:2]
            out += [(j, 1, a, 1), (j, 1, b, 1), (j, 2, 1.0, -1)]
    return out


def a_function(D, z):
    """Direct evaluation of A(z)."""
    z = np.asarray(z, dtype=complex)
    val = 1.0 + 0j
    for j, mult, C, power in a_factors(D):
        t = 1 - C * D.q ** (mult * (D.roots[j] @ z))
        val *= t if power > 0 else 1.0 / t
    return val


def expand_A_shifted(D, w, N, g=None):
    """Expansion of z -> A(w^{-1} z) as x^offset * const * power series."""
    g = g or grid(D.rank, N)
    const = 1.0 + 0j
    offset = np.zeros(g.n, dtype=int)
    ser = TruncatedLaurent.constant(g)
    mat = D.weyl.mats[w]
    for j, mult, C, power in a_factors(D):
        beta = mult * (mat @ D.roots[j])
        c, off, s = _factor(g, D, beta, C, power)
        if abs(s.coeffs[0]) < 1e-300:
            raise SingularPointError("accidental zero constant term in A expansion")
        const *= c
        offset += off
        ser = ser * s
    return TruncatedLaurent(g, ser.coeffs * const, offset)


def orbit_representatives(D):
    """Pairs (w, w psi~) with w running over W0 / W0_psi."""
    seen = []
    reps = []
    for w in range(len(D.weyl)):
        v = D.weyl.mats[w] @ D.psi_tilde
        if not any(np.allclose(v, u) for u in seen):
            seen.append(v)
            reps.append((w, v))
    return reps


def eigenvalue(D, xi):
    """sum over the orbit W0 psi~ of q^{(v, xi)}."""
    xi = np.asarray(xi, dtype=complex)
    return sum(D.q ** (v @ xi) for _, v in orbit_representatives(D))


# -------------------------------------------------------- linear factor algebra
# A factor list holds triples (gamma, c, power) standing for (1 - c x^gamma)^power
# with gamma a primitive nonnegative exponent.  Keeping A(w^{-1}z) and the
# ratios S(z)/S(z+v) in this form lets matching zeros and poles cancel
# exactly before anything is expanded.

def _split(coords, c, power):
    coords = [int(x) for x in coords]
    m = gcd(*coords)
    gam = tuple(x // m for x in coords)
    c = complex(c)
    if m == 1:
        return [(gam, c, power)]
    r = c ** (1.0 / m)
    return [(gam, r * np.exp(2j * np.pi * k / m), power) for k in range(m)]


def _same(f, g, tol=1e-10):
    return f[0] == g[0] and abs(f[1] - g[1]) <= tol * max(1.0, abs(f[1]))


def _cancel(factors):
    out = []
    for f in factors:
        for k, g in enumerate(out):
            if g[2] == -f[2] and _same(f, g):
                out.pop(k)
                break
        else:
            out.append(f)
    return out


def a_linear(D, w):
    """A(w^{-1} z) = const * x^offset * prod (1 - c x^gamma)^power."""
    const = 1.0 + 0j
    offset = np.zeros(D.rank, dtype=int)
    facs = []
    mat = D.weyl.mats[w]
    pinv = np.linalg.pinv(D.simple)
    for j, mult, C, power in a_factors(D):
        coords = np.rint(mult * (mat @ D.roots[j]) @ pinv).astype(int)
        if np.all(coords <= 0):          # q^{beta(z)} = x^{-beta}
            facs += _split(-coords, C, power)
        else:                            # 1 - C x^{-b} = -C x^{-b} (1 - x^b / C)
            const *= (-C) ** power
            offset -= power * coords
            facs += _split(coords, 1.0 / C, power)
    return const, offset, facs


def s_ratio_linear(D, v):
    """S(z) / S(z + v) as a finite factor list (v in the orbit of psi~)."""
    facs = []
    for j in range(D.npos):
        gam = D.coords[j]
        s = -(D.roots[j] @ v) / (2 * D.mu[j])     # q^{-alpha(v)} = Q^s
        Q = D.qa[j] ** 2
        a, b, c, d = D.aw(j)
        if abs(s - round(s)) < 1e-9:
            groups = [(Q / p, Q, int(round(s))) for p in (a, b, c, d)]
        else:
            # half-integral shift: (c, d) = q^mu (a, b) merges pairs into base q^mu
            B = D.qa[j]
            if abs(c - a * B) > 1e-12 or abs(d - b * B) > 1e-12:
                raise SingularPointError("half-integral shift without paired AW parameters")
            groups = [(B / a, B, int(round(2 * s))), (B / b, B, int(round(2 * s)))]
        for C, B, k in groups:
            rng = range(k) if k > 0 else range(k, 0)
            for m in rng:
                facs += _split(gam, C * B ** m, 1 if k > 0 else -1)
    return facs


def _lcm_denominator(lists):
    """Least common multiple of the denominators with poles inside the unit polydisc.

    Denominators (1 - c x^gamma) with |c| <= 1 are left to geometric expansion.
    """
    out = []
    for facs in lists:
        used = [False] * len(out)
        for f in facs:
            if f[2] > 0 or abs(f[1]) <= 1.0:
                continue
            for k, g in enumerate(out):
                if not used[k] and _same(f, g):
                    used[k] = True
                    break
            else:
                out.append((f[0], f[1], 1))
                used.append(True)
    return out


def expand_factors(g, facs, const=1.0):
    """Expansion of const * prod (1 - c x^gamma)^power on the grid ``g``."""
    a = np.zeros(g.size, dtype=complex)
    a[0] = const
    for gam, c, power in facs:
        idx = g.shift_index(gam)
        ok = idx >= 0
        if power > 0:
            for _ in range(power):
                nxt = a.copy()
                nxt[idx[ok]] -= c * a[ok]
                a = nxt
        else:
            for _ in range(-power):
                # divide by (1 - c x^gamma): forward substitution in height order
                for k in range(g.size):
                    if ok[k]:
                        a[idx[k]] += c * a[k]
    return TruncatedLaurent(g, a)


# ------------------------------------------------------------------- recurrence
@dataclass
class GammaTable:
    """Coefficients of Psi = sum Gamma_e x^e at a spectral point."""

    xi: np.ndarray
    gamma: TruncatedLaurent
    cond: float
    N: int

    def coeff(self, e):
        return self.gamma.coeff(e)


class GammaSolver:
    """Precomputed data for the Gamma recurrence at fixed (D, N); solve at many xi.

    The eigenvalue equation is multiplied by a common denominator Delta so
    that every coefficient function is a polynomial in x; this keeps the
    recurrence well conditioned for large multiplicities.
    """

    def __init__(self, D: InitialDatum, N=24, guard=None):
        self.D, self.N, self.guard = D, int(N), resolve_guard(guard)
        g = self.grid = grid(D.rank, N)
        self.reps = orbit_representatives(D)
        parts = []
        for w, v in self.reps:
            const, offset, fa = a_linear(D, w)
            if np.any(offset != 0):
                raise SingularPointError("A(w^{-1}z) expansion has a nonzero offset")
            fa = _cancel(fa)
            fb = _cancel(fa + s_ratio_linear(D, v))
            parts.append((const, fa, fb))
        delta = _lcm_denominator([p[1] for p in parts] + [p[2] for p in parts])
        self.delta = expand_factors(g, delta).coeffs
        self.A = np.array([expand_factors(g, self._polynomial(fa + delta), const).coeffs for const, fa, _ in parts])
        self.B = np.array([expand_factors(g, self._polynomial(fb + delta), const).coeffs for const, _, fb in parts])
        self.vecs = g.exps @ D.simple            # monomial e as a vector of V
        ii, jj, kk, _ = g.triples
        keep = ii != 0
        self._t = (ii[keep], jj[keep], kk[keep])
        self._bounds = np.searchsorted(g.height[self._t[2]], np.arange(N + 2))

    @staticmethod
    def _polynomial(facs):
        out = _cancel(facs)
        if any(p < 0 and abs(c) > 1.0 for _, c, p in out):
            raise SingularPointError("common denominator does not clear a coefficient function")
        return out

    def _setup(self, xi):
        D = self.D
        q = D.q
        w0 = D.weyl.mats[D.weyl.longest]
        vs = np.array([v for _, v in self.reps])
        # g_w(e) = q^{-(rho + w0 xi + e, w psi~)}
        gw = q ** (-((D.rho + w0 @ xi) @ vs.T)[:, None] - vs @ self.vecs.T)
        E = eigenvalue(D, xi)
        denom = (q ** ((xi[None, :] + self.vecs @ w0.T) @ vs.T)).sum(axis=1) - E
        pref = q ** (-(D.rho @ D.psi_tilde))
        lam = E - sum(q ** (D.rho @ v) for v in vs)
        return gw, denom, pref, lam

    def _run(self, xi, T, start):
        g = self.grid
        ii, jj, kk = self._t
        _, denom, _, _ = self._setup(xi)
        out = np.zeros(g.size, dtype=complex)
        out[0] = start
        cond = np.inf
        for h in range(1, self.N + 1):
            s = slice(self._bounds[h], self._bounds[h + 1])
            acc = _bincount_c(kk[s], T[s] * out[jj[s]], g.size)
            lo, hi = g.level_start[h], g.level_start[h + 1]
            d = denom[lo:hi]
            bad = np.abs(d) < self.guard
            if np.any(bad):
                e = g.exps[lo + int(np.argmax(bad))]
                raise ResonanceError(f"resonant spectral point: small denominator at height {h}, alpha={e.tolist()}",
                                     height=h, alpha=e.tolist(), value=float(np.min(np.abs(d))))
            cond = min(cond, float(np.min(np.abs(d))))
            out[lo:hi] = -acc[lo:hi] / d
        return TruncatedLaurent(g, out), cond

    def solve(self, xi):
        from .harish_chandra import gamma0
        xi = np.asarray(xi, dtype=complex)
        gw, _, pref, lam = self._setup(xi)
        ii, jj, _ = self._t
        T = pref * (np.einsum("wt,wt->t", self.B[:, ii], gw[:, jj]) - self.A[:, ii].sum(axis=0)) - lam * self.delta[ii]
        gam, cond = self._run(xi, T, gamma0(self.D, xi))
        return GammaTable(xi, gam, cond, self.N)

    def solve_quotient(self, xi):
        """Coefficients of P = Psi / S from the undivided recurrence.

        Independent of ``solve``; P converges only where 1/S(z) is analytic,
        so this route serves as a cross-check and for Gamma-hat.
        """
        from .harish_chandra import gamma0
        xi = np.asarray(xi, dtype=complex)
        gw, _, pref, _ = self._setup(xi)
        if not hasattr(self, "_A_plain"):
            self._A_plain = np.array([expand_A_shifted(self.D, w, self.N, self.grid).coeffs for w, _ in self.reps])
        ii, jj, _ = self._t
        T = pref * np.einsum("wt,wt->t", self._A_plain[:, ii], gw[:, jj] - 1.0)
        p, _ = self._run(xi, T, gamma0(self.D, xi))
        return p

    def s_series(self):
        D, g = self.D, self.grid
        out = TruncatedLaurent.constant(g)
        for j in range(D.npos):
            Q = D.qa[j] ** 2
            for p in D.aw(j):
                out = out * TruncatedLaurent.qpoch(g, D.coords[j], Q / p, Q)
        return out


def solve_gamma(D, xi, N=24, guard=None):
    """Gamma coefficients of the basic Harish-Chandra series up to height N."""
    return _solver(D, N, guard).solve(xi)


_SOLVERS = {}


def _solver(D, N, guard=None):
    guard = resolve_guard(guard)
    key = (id(D), N, guard)
    s = _SOLVERS.get(key)
    if s is None or s.D is not D:
        s = GammaSolver(D, N, guard)
        if len(_SOLVERS) > 16:
            _SOLVERS.clear()
        _SOLVERS[key] = s
    return s
