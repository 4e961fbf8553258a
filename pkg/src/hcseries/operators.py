"""Difference-reflection operators: Demazure-Lusztig, Y-operators and RMKC operators.

An operator acts on functions f of z in the complexified ambient space by

    (Op f)(z) = sum_g c_g(z) f(g^{-1} z),

g running over a finite set of extended affine Weyl group elements.
Operators are immutable expression trees (primitive terms, products,
linear combinations); ``coefficients(z)`` evaluates the merged map
g -> c_g(z), reusing sub-results at repeated points.
"""
from __future__ import annotations

from collections import defaultdict
from itertools import product as iproduct

import numpy as np

from .errors import DatumError
from .rootdata import AffineWeyl, ExtAffineElement, InitialDatum, c_affine, c_element
from .series import a_function, orbit_representatives


def _key(z):
    z = np.asarray(z, dtype=complex)
    return tuple(np.round(z.real, 11)) + tuple(np.round(z.imag, 11))


class DiffReflOp:
    """Immutable difference-reflection operator over an ``AffineWeyl`` group."""

    def __init__(self, group: AffineWeyl, kind, data):
        self.group = group
        self.kind = kind          # "prim" | "prod" | "lin"
        self.data = data
        self._support = None

    # -- constructors
    @classmethod
    def primitive(cls, group, terms):
        """``terms``: list of (callable z -> complex, ExtAffineElement)."""
        return cls(group, "prim", list(terms))

    @classmethod
    def identity(cls, group):
        return cls.primitive(group, [(lambda z: 1.0 + 0j, group.e)])

    @classmethod
    def element(cls, group, g):
        return cls.primitive(group, [(lambda z: 1.0 + 0j, g)])

    # -- algebra
    def __matmul__(self, other):
        if other.group is not self.group:
            raise ValueError("operators over different groups")
        return DiffReflOp(self.group, "prod", (self, other))

    def __add__(self, other):
        return DiffReflOp(self.group, "lin", [(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return DiffReflOp(self.group, "lin", [(1.0, self), (-1.0, other)])

    def __rmul__(self, c):
        return DiffReflOp(self.group, "lin", [(complex(c), self)])

    @staticmethod
    def linear_combination(group, pairs):
        return DiffReflOp(group, "lin", list(pairs))

    # -- evaluation
    def support(self):
        """Set of group elements that may carry a nonzero coefficient."""
        if self._support is None:
            G = self.group
            if self.kind == "prim":
                s = {g for _, g in self.data}
            elif self.kind == "prod":
                a, b = self.data
                s = {G.compose(g, h) for g in a.support() for h in b.support()}
            else:
                s = set().union(*(op.support() for _, op in self.data))
            self._support = s
        return self._support

    def coefficients(self, z, _cache=None):
        """Merged map g -> c_g(z)."""
        cache = {} if _cache is None else _cache
        key = (id(self), _key(z))
        hit = cache.get(key)
        if hit is not None:
            return hit
        G = self.group
        out = defaultdict(complex)
        if self.kind == "prim":
            for c, g in self.data:
                out[g] += c(z)
        elif self.kind == "prod":
            a, b = self.data
            for g, cg in a.coefficients(z, cache).items():
                zz = G.act(G.inverse(g), z)
                for h, ch in b.coefficients(zz, cache).items():
                    out[G.compose(g, h)] += cg * ch
        else:
            for s, op in self.data:
                for g, c in op.coefficients(z, cache).items():
                    out[g] += s * c
        out = dict(out)
        cache[key] = out
        return out

    @property
    def terms(self):
        """Normalized list of (coefficient evaluator, element)."""
        return [((lambda z, g=g: self.coefficients(z).get(g, 0j)), g) for g in sorted(
            self.support(), key=lambda e: (e.sigma, e.trans))]

    normalized = True

    def apply(self, f, z, full_output=False):
        """(Op f)(z); with ``full_output`` also the term scale sum |c_g f(g^{-1} z)|."""
        G = self.group
        z = np.asarray(z, dtype=complex)
        terms = [c * f(G.act(G.inverse(g), z)) for g, c in self.coefficients(z).items()]
        val = sum(terms)
        if full_output:
            return val, float(sum(abs(t) for t in terms))
        return val

    __call__ = apply


# ---------------------------------------------------------------- generators
def hecke_parameter(D: InitialDatum, i, G=None):
    """kappa_i of the simple affine root a_i (i = 0 is the affine node)."""
    G = G or AffineWeyl(D)
    j, r = G.simple_affine[i]
    return D.kappa_affine(j, r)[0]


def demazure_lusztig(D: InitialDatum, i, G=None):
    """T_i = q^{kappa_i} + q^{-kappa_i} c_i (s_i - id)."""
    G = G or AffineWeyl(D)
    a = G.simple_affine[i]
    k = hecke_parameter(D, i, G)
    q = D.q
    c = lambda z: c_affine(D, a, z)
    return DiffReflOp.primitive(G, [
        (lambda z: q ** k - q ** (-k) * c(z), G.e),
        (lambda z: q ** (-k) * c(z), G.s[i]),
    ])


def demazure_lusztig_inverse(D: InitialDatum, i, G=None):
    """T_i^{-1} = T_i - q^{kappa_i} + q^{-kappa_i}."""
    G = G or AffineWeyl(D)
    a = G.simple_affine[i]
    k = hecke_parameter(D, i, G)
    q = D.q
    c = lambda z: c_affine(D, a, z)
    return DiffReflOp.primitive(G, [
        (lambda z: q ** (-k) - q ** (-k) * c(z), G.e),
        (lambda z: q ** (-k) * c(z), G.s[i]),
    ])


def _word_operator(D, word, omega, G, inverse=False):
    # left-nested products keep evaluation linear in the word length
    if not inverse:
        op = DiffReflOp.identity(G)
        for i in word:
            op = op @ demazure_lusztig(D, i, G)
        return op @ DiffReflOp.element(G, omega)
    # (T_{i1} ... T_{ir} u)^{-1} = u^{-1} T_{ir}^{-1} ... T_{i1}^{-1}
    op = DiffReflOp.element(G, G.inverse(omega))
    for i in reversed(word):
        op = op @ demazure_lusztig_inverse(D, i, G)
    return op


def is_dominant(D, nu, tol=1e-9):
    return bool(np.all(D.tilde_coroots[: D.npos] @ np.asarray(nu, float) > -tol))


def dominant_split(D, nu, G=None, box=3):
    """Dominant (nu1, nu2) with nu = nu1 - nu2 minimizing l(tau(nu1)) + l(tau(nu2))."""
    G = G or AffineWeyl(D)
    nu = np.asarray(nu, dtype=float)
    gens = D.lam_tilde
    best = None
    for c in iproduct(range(-box, box + 1), repeat=len(gens)):
        nu2 = np.array(c) @ gens
        if not (is_dominant(D, nu2) and is_dominant(D, nu + nu2)):
            continue
        cost = G.length(G.translation(nu + nu2)) + G.length(G.translation(nu2))
        if best is None or cost < best[0]:
            best = (cost, nu + nu2, nu2)
    if best is None:
        raise DatumError("no dominant decomposition found in the search box")
    return best[1], best[2]


def y_operator(D: InitialDatum, nu, G=None, order=1):
    """Bernstein-Zelevinsky operator Y^nu; the reduced word follows ``order``."""
    G = G or AffineWeyl(D)
    nu = np.asarray(nu, dtype=float)
    if not D.in_lattice(nu, D.lam_tilde):
        raise DatumError(f"{nu.tolist()} is not in the translation lattice")
    if np.allclose(nu, 0):
        return DiffReflOp.identity(G)
    if is_dominant(D, nu):
        word, omega = G.reduced_word(G.translation(nu), order)
        return _word_operator(D, word, omega, G)
    n1, n2 = dominant_split(D, nu, G)
    w1, o1 = G.reduced_word(G.translation(n1), order)
    w2, o2 = G.reduced_word(G.translation(n2), order)
    return _word_operator(D, w1, o1, G) @ _word_operator(D, w2, o2, G, inverse=True)


def orbit(D, nu):
    W = D.weyl
    out = []
    for w in range(len(W)):
        v = W.mats[w] @ np.asarray(nu, float)
        if not any(np.allclose(v, u) for u in out):
            out.append(v)
    return out


def rmkc_extract(D: InitialDatum, nu, G=None):
    """L_nu: drop the linear parts of sum over the W0-orbit of nu of Y^{nu'}."""
    G = G or AffineWeyl(D)
    if not is_dominant(D, nu):
        raise DatumError("rmkc_extract needs a dominant weight")
    total = DiffReflOp.linear_combination(G, [(1.0, y_operator(D, v, G)) for v in orbit(D, nu)])
    return _ExtractedOp(G, total)


class _ExtractedOp(DiffReflOp):
    """Pure difference operator obtained by replacing tau(mu) sigma by tau(mu)."""

    def __init__(self, group, source):
        super().__init__(group, "extracted", source)

    def support(self):
        return {ExtAffineElement(g.trans, 0) for g in self.data.support()}

    def coefficients(self, z, _cache=None):
        out = defaultdict(complex)
        for g, c in self.data.coefficients(z, _cache).items():
            out[ExtAffineElement(g.trans, 0)] += c
        return dict(out)


def l_explicit(D: InitialDatum, G=None):
    """The explicit second order operator L (use ``D.dual`` for the dual operator)."""
    G = G or AffineWeyl(D)
    q = D.q
    reps = orbit_representatives(D)
    pref = q ** (-(D.rho @ D.psi_tilde))
    const = sum(q ** (-(D.rho @ v)) for _, v in reps)
    W = D.weyl
    terms = []
    for w, v in reps:
        winv = W.mats[W.inv[w]]
        terms.append((lambda z, winv=winv: pref * a_function(D, winv @ z), G.translation(-v)))
        terms.append((lambda z, winv=winv: -pref * a_function(D, winv @ z), G.e))
    terms.append((lambda z: const + 0j, G.e))
    return DiffReflOp.primitive(G, terms)


def l_tau_psi(D: InitialDatum, G=None):
    """L written with c_{tau(psi~)} in place of A."""
    G = G or AffineWeyl(D)
    q = D.q
    reps = orbit_representatives(D)
    pref = q ** (-(D.rho @ D.psi_tilde))
    const = sum(q ** (-(D.rho @ v)) for _, v in reps)
    t = G.translation(D.psi_tilde)
    W = D.weyl
    terms = []
    for w, v in reps:
        winv = W.mats[W.inv[w]]
        c = lambda z, winv=winv: c_element(D, t, winv @ z, group=G)
        terms.append((lambda z, c=c: pref * c(z), G.translation(-v)))
        terms.append((lambda z, c=c: -pref * c(z), G.e))
    terms.append((lambda z: const + 0j, G.e))
    return DiffReflOp.primitive(G, terms)


# ------------------------------------------------------------- test functions
class RationalTestFunction:
    """Fixed-seed rational function of the variables q^{(e_i, z)}.

    f(z) = sum_k a_k q^{(m_k, z)} / (1 + b q^{(v, z)}) with small integer
    exponent vectors; poles stay away from moderate sampling boxes.
    """

    def __init__(self, dim, q, rng, terms=3):
        self.q = q
        self.a = rng.normal(size=terms) + 1j * rng.normal(size=terms)
        self.m = rng.integers(-2, 3, size=(terms, dim))
        self.v = rng.integers(-1, 2, size=dim)
        self.b = 0.1 * (rng.normal() + 1j * rng.normal())

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        num = np.sum(self.a * self.q ** (self.m @ z))
        return num / (1.0 + self.b * self.q ** (self.v @ z))


def identity_residual(lhs, rhs, f, z):
    """|(lhs f)(z) - (rhs f)(z)| relative to the magnitude of the summed terms."""
    a, sa = lhs.apply(f, z, full_output=True)
    b, sb = rhs.apply(f, z, full_output=True)
    return float(abs(a - b) / max(sa, sb, 1e-300))
