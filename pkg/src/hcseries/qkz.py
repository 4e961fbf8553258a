"""The bispectral quantum KZ cocycle C_{(w, w~)}(z, xi).

Matrices act on V = span{v_sigma : sigma in W0}; the basis follows the
``WeylTable`` enumeration order and ``M[s1, s2]`` is the coefficient of
v_{s1} in C v_{s2}.  The left group W = W0 x Lambda~ acts on z, the dual
group W~ = W0 x Lambda acts on xi.  All c-functions inside the generators
are evaluated at the negated multiplicities, passed explicitly through
``KAPPA_SIGN``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DatumError, SingularPointError
from .rootdata import AffineWeyl, ExtAffineElement, InitialDatum, c_affine
from .settings import resolve_guard

# the generators use c_a(.; -kappa, q)
KAPPA_SIGN = -1


@lru_cache(maxsize=32)
def _groups(D: InitialDatum):
    G, Gt = AffineWeyl(D), AffineWeyl(D.dual)
    if not np.array_equal(D.weyl.mats, D.dual.weyl.mats):
        raise DatumError("internal: Weyl group enumeration differs between D and its dual")
    return G, Gt


class QKZCocycle:
    """Generators and cocycle values for a fixed initial datum."""

    def __init__(self, D: InitialDatum, guard=None):
        self.D = D
        self.Dt = D.dual
        self.guard = resolve_guard(guard)
        self.G, self.Gt = _groups(D)
        self.W = D.weyl
        self.size = len(self.W)

    # ------------------------------------------------------------ helpers
    def _negative(self, w, j):
        """chi(w alpha_j): 1 if w maps root j to a negative root."""
        return 0 if self.D.positive[self.W.perm[w, j]] else 1

    def _c(self, Dx, a, x):
        c = c_affine(Dx, a, x, sign=KAPPA_SIGN, guard=self.guard)
        if abs(c) < self.guard:
            raise SingularPointError(f"c_a(.; -kappa) vanishes at {a}", where=a, value=abs(c))
        return c

    def _two_term(self, c, k, off_index, off_scale, diag_exp):
        """Matrix with columns v_s -> off_scale[s] v_{off[s]} / (q^k c) + (c - q^{-2 e_s k}) / c v_s."""
        q = self.D.q
        M = np.zeros((self.size, self.size), dtype=complex)
        for s in range(self.size):
            M[off_index[s], s] += off_scale[s] / (q ** k * c)
            M[s, s] += (c - q ** (-2 * diag_exp[s] * k)) / c
        return M

    # --------------------------------------------------------- generators
    def left_generator(self, which, z, xi):
        """C_{(s_i, e)} for an int ``which`` in 0..n, or C_{(omega, e)} for a length-zero omega."""
        D, W = self.D, self.W
        z = np.asarray(z, dtype=complex)
        xi = np.asarray(xi, dtype=complex)
        if isinstance(which, ExtAffineElement):
            return self._omega(which, xi, left=True)
        i = int(which)
        a = self.G.simple_affine[i]
        c = self._c(D, a, z)
        k = D.kappa_affine(*a)[0]
        S = range(self.size)
        if i == 0:
            spsi = W.reflection(D.psi)
            off = [W.mul[spsi, s] for s in S]
            scale = [D.q ** (D.psi_tilde @ (W.mats[s] @ xi)) for s in S]
            diag = [self._negative(W.inv[s], D.psi) for s in S]
        else:
            j = int(D.simple_index[i - 1])
            si = W.simple[i - 1]
            off = [W.mul[si, s] for s in S]
            scale = [1.0] * self.size
            diag = [1 - self._negative(W.inv[s], j) for s in S]
        return self._two_term(c, k, off, scale, diag)

    def dual_generator(self, which, z, xi):
        """C_{(e, s~_i)} for an int ``which`` in 0..n, or C_{(e, omega~)}."""
        Dt, W = self.Dt, self.W
        z = np.asarray(z, dtype=complex)
        xi = np.asarray(xi, dtype=complex)
        if isinstance(which, ExtAffineElement):
            return self._omega(which, z, left=False)
        i = int(which)
        a = self.Gt.simple_affine[i]
        c = self._c(Dt, a, xi)
        k = Dt.kappa_affine(*a)[0]
        S = range(self.size)
        if i == 0:
            sth = W.reflection(Dt.psi)
            off = [W.mul[s, sth] for s in S]
            scale = [Dt.q ** (Dt.psi_tilde @ (W.mats[W.inv[s]] @ z)) for s in S]
            diag = [self._negative(s, Dt.psi) for s in S]
        else:
            j = int(Dt.simple_index[i - 1])
            si = W.simple[i - 1]
            off = [W.mul[s, si] for s in S]
            scale = [1.0] * self.size
            diag = [1 - self._negative(s, j) for s in S]
        return self._two_term(c, k, off, scale, diag)

    def _omega(self, omega, x, left):
        """Length-zero generators: v_s -> q^{-(w0 nu, s x)} v_{v^{-1} s} (left) or the dual form."""
        G = self.G if left else self.Gt
        D, W = self.D, self.W
        if G.length(omega) != 0:
            raise DatumError("omega must have length zero")
        nu = G.trans_vector(omega)
        w0nu = W.mats[W.longest] @ nu
        vinv = omega.sigma
        M = np.zeros((self.size, self.size), dtype=complex)
        for s in range(self.size):
            if left:
                M[W.mul[vinv, s], s] = D.q ** (-(w0nu @ (W.mats[s] @ x)))
            else:
                M[W.mul[s, W.inv[vinv]], s] = D.q ** (-(w0nu @ (W.mats[W.inv[s]] @ x)))
        return M

    # ------------------------------------------------------------ cocycle
    def word_matrix(self, word, z, xi, side="left", omega=None, full_output=False):
        """Product C_{s_{i1}} C_{s_{i2}}(s_{i1}^{-1} .) ... along ``word`` (then ``omega``).

        With ``full_output`` also returns the product of the factor norms,
        the scale of the rounding error of the product.
        """
        G = self.G if side == "left" else self.Gt
        gen = self.left_generator if side == "left" else self.dual_generator
        z = np.asarray(z, dtype=complex)
        xi = np.asarray(xi, dtype=complex)
        M = np.eye(self.size, dtype=complex)
        pt = z if side == "left" else xi
        scale = 1.0
        for i in list(word) + ([omega] if omega is not None else []):
            g = G.s[i] if not isinstance(i, ExtAffineElement) else i
            F = gen(i, pt, xi) if side == "left" else gen(i, z, pt)
            M = M @ F
            scale *= np.linalg.norm(F)
            pt = G.act(G.inverse(g), pt)
        return (M, scale) if full_output else M

    def error_scale(self, w, wt, z, xi, order=1):
        """Product of the generator norms along the reduced words of C_{(w, w~)}(z, xi)."""
        G, Gt = self.G, self.Gt
        w = w if w is not None else G.e
        wt = wt if wt is not None else Gt.e
        z = np.asarray(z, dtype=complex)
        word, om = G.reduced_word(w, order)
        _, a = self.word_matrix(word, z, xi, "left", None if om == G.e else om, full_output=True)
        word, om = Gt.reduced_word(wt, order)
        _, b = self.word_matrix(word, G.act(G.inverse(w), z), xi, "dual", None if om == Gt.e else om,
                                full_output=True)
        return a * b

    def left(self, w, z, xi, order=1):
        word, omega = self.G.reduced_word(w, order)
        return self.word_matrix(word, z, xi, "left", None if omega == self.G.e else omega)

    def dual(self, wt, z, xi, order=1):
        word, omega = self.Gt.reduced_word(wt, order)
        return self.word_matrix(word, z, xi, "dual", None if omega == self.Gt.e else omega)

    def __call__(self, w, wt, z, xi, order=1):
        """C_{(w, w~)}(z, xi) = C_{(w, e)}(z, xi) C_{(e, w~)}(w^{-1} z, xi)."""
        z = np.asarray(z, dtype=complex)
        w = w if w is not None else self.G.e
        wt = wt if wt is not None else self.Gt.e
        zz = self.G.act(self.G.inverse(w), z)
        return self.left(w, z, xi, order) @ self.dual(wt, zz, xi, order)

    # ------------------------------------------------------------- action
    def nabla(self, g, f, z, xi):
        """(nabla(w, w~) f)(z, xi) = C_{(w, w~)}(z, xi) f(w^{-1} z, w~^{-1} xi)."""
        w, wt = g
        z = np.asarray(z, dtype=complex)
        xi = np.asarray(xi, dtype=complex)
        zz = self.G.act(self.G.inverse(w), z)
        xx = self.Gt.act(self.Gt.inverse(wt), xi)
        return self(w, wt, z, xi) @ np.asarray(f(zz, xx), dtype=complex)


# ---------------------------------------------------------------- functional API
def c_generator(D, which, side, z, xi, guard=None):
    """Generator matrix; ``which`` is 0..n or a length-zero element, ``side`` is left or dual."""
    Q = QKZCocycle(D, guard)
    if side == "left":
        return Q.left_generator(which, z, xi)
    if side in ("dual", "right-dual"):
        return Q.dual_generator(which, z, xi)
    raise ValueError(f"side must be 'left' or 'dual', got {side!r}")


def c_cocycle(D, w, wt, z, xi, order=1, guard=None):
    return QKZCocycle(D, guard)(w, wt, z, xi, order)


def _rel(a, b):
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300))


def word_independence_residual(D, w, wt, z, xi, split=None):
    """Compare two reduced-word orders and, with ``split=(v, v~)``, the cocycle factorization.

    The split residual is ||C_g - C_v C_{v^{-1} g}|| divided by the product of
    the generator norms along both factors (``QKZCocycle.error_scale``).
    """
    Q = QKZCocycle(D)
    A = Q(w, wt, z, xi, order=1)
    B = Q(w, wt, z, xi, order=-1)
    res = _rel(A, B)
    if split is not None:
        G, Gt = Q.G, Q.Gt
        v, vt = split
        w2, wt2 = G.compose(G.inverse(v), w), Gt.compose(Gt.inverse(vt), wt)
        zz = G.act(G.inverse(v), np.asarray(z, dtype=complex))
        xx = Gt.act(Gt.inverse(vt), np.asarray(xi, dtype=complex))
        B, C = Q(v, vt, z, xi), Q(w2, wt2, zz, xx)
        # a non-reduced factorization cancels; measure against the rounding scale of the factors
        scale = max(Q.error_scale(v, vt, z, xi) * Q.error_scale(w2, wt2, zz, xx), np.linalg.norm(A))
        res = max(res, float(np.linalg.norm(A - B @ C) / scale))
    return res


def braid_residuals(D, z, xi):
    """Residuals of all braid relations among s_0, ..., s_n on both sides."""
    Q = QKZCocycle(D)
    out = {}
    for side, G in (("left", Q.G), ("dual", Q.Gt)):
        n = len(G.s)
        for i in range(n):
            for j in range(i + 1, n):
                g, m = G.e, 0
                while True:
                    m += 1
                    g = G.compose(G.compose(G.s[i], G.s[j]), g)
                    if g == G.e:
                        break
                    if m > 6:
                        m = None
                        break
                if m is None:
                    continue
                wi = [i, j] * m
                wj = [j, i] * m
                A = Q.word_matrix(wi[:m], z, xi, side)
                B = Q.word_matrix(wj[:m], z, xi, side)
                out[(side, i, j)] = _rel(A, B)
    return out


def quadratic_residual(D, i, z, xi, side="left"):
    """|C_{s_i}(z, xi) C_{s_i}(s_i z, xi) - I| (and its dual analogue)."""
    Q = QKZCocycle(D)
    return _rel(Q.word_matrix([i, i], z, xi, side), np.eye(Q.size))


def duality_residual(D, w, wt, z, xi):
    """[C_{(w,w~)}(z,xi; D)]_{s,s'} against [C~_{(w~,w)}(xi,z; D~)]_{s^{-1},s'^{-1}}."""
    Q, Qt = QKZCocycle(D), QKZCocycle(D.dual)
    A = Q(w, wt, z, xi)
    B = Qt(wt, w, xi, z)
    inv = D.weyl.inv
    return _rel(A, B[np.ix_(inv, inv)])


def bispectral_compatibility_residual(D, nu, lam, z, xi):
    """C_{(tau(nu), e)}(z, xi) C_{(e, tau(lam))}(z - nu, xi) vs the other order."""
    Q = QKZCocycle(D)
    t, tt = Q.G.translation(nu), Q.Gt.translation(lam)
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    A = Q(t, None, z, xi) @ Q(None, tt, z - np.asarray(nu), xi)
    B = Q(None, tt, z, xi) @ Q(t, None, z, xi - np.asarray(lam))
    return _rel(A, B)


def nabla_action_residual(D, g1, g2, f, z, xi):
    """|nabla(g1) nabla(g2) f - nabla(g1 g2) f| at one point.

    Measured against the rounding scale of the composite (generator norms
    along both factors times ||f||), since large translations make the
    product cancel.
    """
    Q = QKZCocycle(D)
    G, Gt = Q.G, Q.Gt
    z = np.asarray(z, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    zz = G.act(G.inverse(g1[0]), z)
    xx = Gt.act(Gt.inverse(g1[1]), xi)
    C1 = Q(g1[0], g1[1], z, xi)
    C2 = Q(g2[0], g2[1], zz, xx)
    fv = np.asarray(f(G.act(G.inverse(g2[0]), zz), Gt.act(Gt.inverse(g2[1]), xx)), dtype=complex)
    a = C1 @ (C2 @ fv)
    g12 = (G.compose(g1[0], g2[0]), Gt.compose(g1[1], g2[1]))
    b = Q.nabla(g12, f, z, xi)
    return float(np.linalg.norm(a - b) / max(Q.error_scale(g1[0], g1[1], z, xi) * Q.error_scale(g2[0], g2[1], zz, xx) * np.linalg.norm(fv),
                                            np.linalg.norm(b), 1e-300))


# ------------------------------------------------------------------ r_lambda^(0)
def r_lambda(D, lam, z, xi):
    """R_lambda(z, xi) = q^{(rho~ + w0 z, lam)} (C_{(e, tau(lam))}(z, xi) v_{w0})|_{v_{w0}}."""
    Q = QKZCocycle(D)
    W = D.weyl
    w0 = W.longest
    z = np.asarray(z, dtype=complex)
    M = Q(None, Q.Gt.translation(lam), z, xi)
    return D.q ** ((D.rho_tilde + W.mats[w0] @ z) @ np.asarray(lam, float)) * M[w0, w0]


def r0_product(D, lam, xi, guard=None):
    """prod over a in R~^+ with tau(lam)^{-1} a negative of c_a(xi; -kappa~)^{-1}."""
    Dt = D.dual
    Gt = _groups(D)[1]
    out = 1.0 + 0j
    for a in Gt.inversion_set(Gt.inverse(Gt.translation(lam))):
        out /= c_affine(Dt, a, xi, sign=KAPPA_SIGN, guard=guard)
    return out


def chamber_point(D, depth, rng=None, jitter=0.3):
    """A point z with Re alpha_i(z) = -depth (plus jitter) for all simple alpha_i."""
    n = D.rank
    target = -depth * np.ones(n)
    if rng is not None:
        target = target + jitter * (rng.random(n) - 0.5) + 1j * jitter * (rng.random(n) - 0.5)
    return D.project(np.linalg.lstsq(D.simple, target.astype(complex), rcond=None)[0])


def verify_r0(D, lam, xi, depth=30.0, rng=None):
    """Relative residual |R_lambda(z, xi) - r_lambda^(0)(xi)| at chamber depth ``depth``."""
    z = chamber_point(D, depth, rng)
    a = r_lambda(D, lam, z, xi)
    b = r0_product(D, lam, xi)
    return float(abs(a - b) / max(abs(b), 1e-300))


# ------------------------------------------------------- Cherednik-Matsuo map
def chi_weights(D):
    """q^{kappa_{w0} - kappa_w} for w in W0."""
    W = D.weyl
    kw = np.array([W.kappa_w(w) for w in range(len(W))])
    return D.q ** (kw[W.longest] - kw)


def chi(D, fvec):
    """chi(sum f_w v_w) = q^{kappa_{w0}} sum_w q^{-kappa_w} f_w."""
    return complex(chi_weights(D) @ np.asarray(fvec, dtype=complex))


def chi_equivariance_residual(D, g, f, z, xi):
    """|chi(nabla(g) f)(z, xi) - (chi f)(g^{-1}(z, xi))| for g in W0 x W0."""
    Q = QKZCocycle(D)
    w, wt = g
    if any(np.any(x.trans) for x in (w, wt)):
        raise DatumError("chi is equivariant for the finite Weyl groups only")
    lhs = chi(D, Q.nabla(g, f, z, xi))
    zz = Q.G.act(Q.G.inverse(w), np.asarray(z, dtype=complex))
    xx = Q.Gt.act(Q.Gt.inverse(wt), np.asarray(xi, dtype=complex))
    rhs = chi(D, f(zz, xx))
    scale = float(np.abs(chi_weights(D)) @ np.abs(Q.nabla(g, f, z, xi)))
    return float(abs(lhs - rhs) / max(scale, 1e-300))


class RationalVectorFunction:
    """V-valued test function with rational components in q^{z_k}, q^{xi_k}."""

    def __init__(self, D, rng, terms=2):
        self.q = D.q
        m, d = len(D.weyl), D.dim
        self.a = rng.normal(size=(m, terms)) + 1j * rng.normal(size=(m, terms))
        self.mz = rng.integers(-2, 3, size=(m, terms, d))
        self.mx = rng.integers(-2, 3, size=(m, terms, d))
        self.b = 0.1 * (rng.normal(size=m) + 1j * rng.normal(size=m))
        self.v = rng.integers(-1, 2, size=(m, d))

    def __call__(self, z, xi):
        z = np.asarray(z, dtype=complex)
        xi = np.asarray(xi, dtype=complex)
        num = np.sum(self.a * self.q ** (self.mz @ z + self.mx @ xi), axis=1)
        return num / (1.0 + self.b * self.q ** (self.v @ z))
