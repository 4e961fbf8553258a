"""Root system data, multiplicity functions and (extended affine) Weyl groups.

Vectors live in the standard realizations: type A_n in R^{n+1} and type
B_n in R^n.  Lattice vectors are stored as integer numerators over a common
denominator ``den`` so that all group combinatorics is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd

import numpy as np

from .errors import DatumError, SingularPointError
from .settings import resolve_guard

# column order of the per-root multiplicity table
KAPPA_LABELS = ("alpha", "2alpha", "alpha1", "2alpha1")
K, K2, K1, K21 = range(4)

SUPPORTED = {"GL": (1, 2), "A": (1, 2), "B": (1, 3)}
_ALIASES = {
    "gl": "GL", "a": "A", "a-semisimple": "A", "semisimple": "A",
    "b": "B", "koornwinder": "B", "b-koornwinder": "B", "bc": "B",
}

DEFAULT_POLE_GUARD = 1e-8  # initial value of settings "pole_guard"


def canonical_family(name):
    key = str(name).strip()
    if key in SUPPORTED:
        return key
    try:
        return _ALIASES[key.lower()]
    except KeyError:
        raise DatumError(f"unsupported family {name!r}; use one of GL, A, B") from None


class InitialDatum:
    """The triple (D, kappa, q) with all derived constants.

    Parameters
    ----------
    family : str
        ``"GL"``, ``"A"`` (semisimple, weight lattices) or ``"B"`` (Koornwinder).
    roots : (m, d) array
        All roots. They are re-sorted so that positive roots come first by
        height and ``-roots[i]`` sits at index ``i + m//2``.
    simple : (n, d) array
        Ordered basis of the root system.
    bullet : {"u", "t"}
    lam, lam_tilde : (k, d) arrays
        Generators of the lattices Lambda and Lambda-tilde.
    kappa : (m_in, 4) array
        Multiplicities per input root, columns ordered as ``KAPPA_LABELS``.
    q : float in (0, 1)
    den : int
        Common denominator of all lattice vectors.
    """

    def __init__(self, family, roots, simple, bullet, lam, lam_tilde, kappa, q,
                 den=1, semisimple=False, orbit_names=None):
        if not 0.0 < float(q) < 1.0:
            raise DatumError(f"q must lie in (0,1), got {q}")
        if bullet not in ("u", "t"):
            raise DatumError(f"bullet must be 'u' or 't', got {bullet!r}")
        self.family = family
        self.bullet = bullet
        self.q = float(q)
        self.den = int(den)
        self.semisimple = bool(semisimple)
        simple = np.asarray(simple, dtype=float)
        roots = np.asarray(roots, dtype=float)
        kappa = np.asarray(kappa, dtype=float)
        self.simple = simple
        self.rank, self.dim = simple.shape
        coords = np.rint(roots @ np.linalg.pinv(simple)).astype(int)
        if not np.allclose(coords @ simple, roots, atol=1e-9):
            raise DatumError("roots are not integral combinations of the simple roots")
        signs = np.sign(coords)
        if not all((s >= 0).all() or (s <= 0).all() for s in signs):
            raise DatumError("a root has mixed-sign simple-root coordinates")
        height = coords.sum(axis=1)
        pos = [i for i in np.argsort(height, kind="stable") if height[i] > 0]
        lookup = {tuple(c): i for i, c in enumerate(coords)}
        neg = [lookup[tuple(-coords[i])] for i in pos]
        order = np.array(pos + neg)
        self.roots = roots[order]
        self.coords = coords[order]
        self.kappa = kappa[order]
        self.npos = len(pos)
        self.nroots = 2 * self.npos
        self.root_index = {tuple(c): i for i, c in enumerate(self.coords)}
        self.height = self.coords.sum(axis=1)
        self.positive = self.height > 0
        self.norm2 = np.einsum("ij,ij->i", self.roots, self.roots)
        self.mu = np.ones(self.nroots) if bullet == "u" else self.norm2 / 2.0
        self.coroots = 2.0 * self.roots / self.norm2[:, None]
        self.tilde = self.mu[:, None] * self.coroots          # alpha-tilde
        self.tilde_coroots = self.roots / self.mu[:, None]    # (alpha-tilde)^vee
        self.qa = self.q ** self.mu
        self.lam = np.asarray(lam, dtype=float)
        self.lam_tilde = np.asarray(lam_tilde, dtype=float)
        self.simple_index = np.array([self.root_index[tuple(np.eye(self.rank, dtype=int)[i])]
                                      for i in range(self.rank)])
        self.orbit_names = [orbit_names[k] for k in order] if orbit_names is not None else None
        self._check_lattices()
        self._check_kappa()

    # ------------------------------------------------------------------ basics
    def neg(self, i):
        """Index of the root ``-roots[i]``."""
        return (i + self.npos) % self.nroots

    def index_of(self, v):
        c = tuple(np.rint(np.asarray(v, float) @ np.linalg.pinv(self.simple)).astype(int))
        try:
            i = self.root_index[c]
        except KeyError:
            raise DatumError(f"{v} is not a root") from None
        if not np.allclose(self.roots[i], v, atol=1e-9):
            raise DatumError(f"{v} is not a root")
        return i

    def lattice_parity(self, which="lam"):
        """Per root, the positive generator of (Lambda, alpha^vee) (1 or 2).

        ``which="lam_tilde"`` gives the generator of (Lambda-tilde, alpha-tilde^vee).
        """
        if which == "lam":
            vals = self.lam @ self.coroots.T
        else:
            vals = self.lam_tilde @ self.tilde_coroots.T
        ints = np.rint(vals).astype(int)
        out = np.zeros(self.nroots, dtype=int)
        for j in range(self.nroots):
            g = 0
            for v in ints[:, j]:
                g = gcd(g, abs(int(v)))
            out[j] = g
        return out

    def _check_lattices(self):
        for name, gens, cor in (("Lambda", self.lam, self.coroots),
                                ("Lambda-tilde", self.lam_tilde, self.tilde_coroots)):
            vals = gens @ cor.T
            if not np.allclose(vals, np.rint(vals), atol=1e-9):
                raise DatumError(f"({name}, coroots) is not integral")
        for name, gens, rts in (("Lambda", self.lam, self.roots),
                                ("Lambda-tilde", self.lam_tilde, self.tilde)):
            for r in rts[: self.npos]:
                if not self.in_lattice(r, gens):
                    raise DatumError(f"root lattice not contained in {name}")
        if not np.allclose(self.lam * self.den, np.rint(self.lam * self.den), atol=1e-9):
            raise DatumError("lattice denominators exceed den")

    def in_lattice(self, v, gens=None):
        gens = self.lam_tilde if gens is None else gens
        c, *_ = np.linalg.lstsq(gens.T, np.asarray(v, float), rcond=None)
        return np.allclose(c, np.rint(c), atol=1e-9) and np.allclose(gens.T @ np.rint(c), v, atol=1e-9)

    def _check_kappa(self):
        par = self.lattice_parity("lam")
        part = self.lattice_parity("lam_tilde")
        k = self.kappa
        for j in range(self.nroots):
            if par[j] == 1 and (abs(k[j, K2] - k[j, K]) > 1e-12 or abs(k[j, K21] - k[j, K1]) > 1e-12):
                raise DatumError("kappa_{2a} must equal kappa_a when (Lambda, a^vee) = Z")
            if part[j] == 1 and (abs(k[j, K1] - k[j, K]) > 1e-12 or abs(k[j, K21] - k[j, K2]) > 1e-12):
                raise DatumError("kappa_{a^(1)} must equal kappa_a when (Lambda~, a~^vee) = Z")
        for w in range(len(self.weyl)):
            if not np.allclose(k[self.weyl.perm[w]], k, atol=1e-12):
                raise DatumError("kappa is not W0-invariant")

    # --------------------------------------------------------------- constants
    @cached_property
    def weyl(self):
        return WeylTable(self)

    @cached_property
    def psi(self):
        """Index of psi: highest root (u) or highest short root (t)."""
        return self.theta if self.bullet == "t" else int(np.argmax(np.where(self.positive, self.height, -1)))

    @cached_property
    def theta(self):
        """Index of the highest short root."""
        short = self.norm2 <= self.norm2.min() + 1e-9
        return int(np.argmax(np.where(self.positive & short, self.height, -1)))

    @cached_property
    def psi_tilde(self):
        return self.tilde[self.psi]

    @cached_property
    def rho(self):
        k = self.kappa[: self.npos]
        return 0.5 * ((k[:, K] + k[:, K1])[:, None] * self.tilde_coroots[: self.npos]).sum(axis=0)

    @cached_property
    def rho_tilde(self):
        k = self.kappa[: self.npos]
        return 0.5 * ((k[:, K] + k[:, K2])[:, None] * self.coroots[: self.npos]).sum(axis=0)

    @cached_property
    def delta_s_vee(self):
        """Half the sum of the coroots of the positive short roots."""
        short = self.norm2[: self.npos] <= self.norm2.min() + 1e-9
        return 0.5 * self.coroots[: self.npos][short].sum(axis=0)

    def kappa_of(self, i, label):
        return float(self.kappa[i, KAPPA_LABELS.index(label) if isinstance(label, str) else label])

    def kappa_affine(self, i, r):
        """(kappa_a, kappa_2a) for the affine root a = alpha_i^{(r)}."""
        if r % 2 == 0:
            return self.kappa[i, K], self.kappa[i, K2]
        return self.kappa[i, K1], self.kappa[i, K21]

    def aw(self, i):
        """Askey-Wilson parameters (a, b, c, d) of root ``i``."""
        k, k2, k1, k21 = self.kappa[i]
        q, qa = self.q, self.qa[i]
        return np.array([q ** (k + k2), -q ** (k - k2), qa * q ** (k1 + k21), -qa * q ** (k1 - k21)])

    def aw_dual(self, i):
        """Dual Askey-Wilson parameters (a~, b~, c~, d~) of root ``i``."""
        k, k2, k1, k21 = self.kappa[i]
        q, qa = self.q, self.qa[i]
        return np.array([q ** (k + k1), -q ** (k - k1), qa * q ** (k2 + k21), -qa * q ** (k2 - k21)])

    @cached_property
    def aw_table(self):
        return np.array([self.aw(i) for i in range(self.nroots)])

    @cached_property
    def aw_dual_table(self):
        return np.array([self.aw_dual(i) for i in range(self.nroots)])

    def case(self, i):
        """Local rank-one case of root ``i``."""
        p, pt = self.lattice_parity("lam")[i], self.lattice_parity("lam_tilde")[i]
        if p == 1 and pt == 1:
            return "q-ultraspherical"
        if p == 2 and pt == 2:
            return "askey-wilson"
        return "q-jacobi"

    def project(self, z):
        """Orthogonal projection onto the span of the roots (identity unless semisimple)."""
        z = np.asarray(z, dtype=complex)
        if not self.semisimple:
            return z
        return z - z.mean() * np.ones(self.dim) if self.family == "A" else z

    def root_values(self, z, tilde=False):
        """Pairings (alpha, z) (or (alpha-tilde, z)) for all roots."""
        m = self.tilde if tilde else self.roots
        return m @ np.asarray(z, dtype=complex)

    @cached_property
    def dual(self):
        return dual_datum(self)

    def summary(self):
        return {
            "family": self.family, "rank": self.rank, "bullet": self.bullet, "q": self.q,
            "roots_positive": self.roots[: self.npos].tolist(),
            "psi": self.roots[self.psi].tolist(), "theta": self.roots[self.theta].tolist(),
            "rho": self.rho.tolist(), "rho_tilde": self.rho_tilde.tolist(),
            "weyl_order": len(self.weyl),
            "aw": {str(self.roots[i].tolist()): self.aw(i).tolist() for i in range(self.npos)},
            "aw_dual": {str(self.roots[i].tolist()): self.aw_dual(i).tolist() for i in range(self.npos)},
            "cases": {str(self.roots[i].tolist()): self.case(i) for i in range(self.npos)},
        }

    def __repr__(self):
        return f"InitialDatum({self.family}{self.rank}, bullet={self.bullet}, q={self.q})"


# ---------------------------------------------------------------------- builders
def _family_geometry(family, n):
    if family in ("GL", "A"):
        d = n + 1
        e = np.eye(d, dtype=int)
        roots = [e[i] - e[j] for i in range(d) for j in range(d) if i != j]
        simple = [e[i] - e[i + 1] for i in range(n)]
        if family == "GL":
            return d, roots, simple, e, e, 1, False
        den = n + 1
        fund = [np.r_[np.ones(k + 1), np.zeros(d - k - 1)] - (k + 1) / d for k in range(n)]
        return d, roots, simple, np.array(fund), np.array(fund), den, True
    e = np.eye(n, dtype=int)
    roots = [s * e[i] for i in range(n) for s in (1, -1)]
    for i in range(n):
        for j in range(i + 1, n):
            for s1, s2 in product((1, -1), repeat=2):
                roots.append(s1 * e[i] + s2 * e[j])
    simple = [e[i] - e[i + 1] for i in range(n - 1)] + [e[n - 1]]
    return n, roots, simple, e, e, 1, False


def _orbit_name(norm2):
    return "long" if norm2 > 1.5 else "short"


def resolve_kappa(value, parity, parity_tilde):
    """Complete one orbit's four multiplicities, applying the identification rules.

    ``value`` is a number (all four tied) or a mapping with some of the keys
    ``KAPPA_LABELS``.  Conflicting inputs raise ``DatumError``.
    """
    if isinstance(value, (int, float, np.floating, np.integer)):
        return np.full(4, float(value))
    if not isinstance(value, dict):
        raise DatumError(f"kappa entry must be a number or a table, got {value!r}")
    unknown = set(value) - set(KAPPA_LABELS)
    if unknown:
        raise DatumError(f"unknown kappa labels {sorted(unknown)}; use {KAPPA_LABELS}")
    vals = {k: float(v) for k, v in value.items()}
    ties = []
    if parity == 1:
        ties += [("2alpha", "alpha"), ("2alpha1", "alpha1")]
    if parity_tilde == 1:
        ties += [("alpha1", "alpha"), ("2alpha1", "2alpha")]
    changed = True
    while changed:
        changed = False
        for a, b in ties:
            if a in vals and b in vals:
                if abs(vals[a] - vals[b]) > 1e-12:
                    raise DatumError(f"kappa_{a}={vals[a]} conflicts with kappa_{b}={vals[b]} "
                                     "under the lattice identification")
            elif a in vals or b in vals:
                src = a if a in vals else b
                vals[b if src == a else a] = vals[src]
                changed = True
    missing = [k for k in KAPPA_LABELS if k not in vals]
    if missing:
        raise DatumError(f"kappa values {missing} are independent for this orbit and must be given")
    return np.array([vals[k] for k in KAPPA_LABELS])


def build_datum(family, rank, bullet="t", kappa_values=0.0, q=0.5):
    """Construct a supported initial datum.

    ``kappa_values`` is a number (applied to every orbit), or a mapping from
    orbit label (``"long"``, ``"short"`` or ``"*"``) to a number or to a table
    keyed by ``KAPPA_LABELS``.

    >>> D = build_datum("A", 1, "t", 0.3, 0.5)
    >>> len(D.weyl), D.rho.round(3).tolist()
    (2, [0.15, -0.15])
    """
    fam = canonical_family(family)
    lo, hi = SUPPORTED[fam]
    if not lo <= int(rank) <= hi:
        raise DatumError(f"{fam} supports rank {lo}..{hi}, got {rank}")
    n = int(rank)
    if fam == "B" and bullet != "t":
        raise DatumError("the Koornwinder datum is twisted (bullet 't')")
    if not 0.0 < float(q) < 1.0:
        raise DatumError(f"q must lie in (0,1), got {q}")
    d, roots, simple, lam, lamt, den, ss = _family_geometry(fam, n)
    roots = np.array(roots, dtype=float)
    norm2 = (roots ** 2).sum(axis=1)
    names = [_orbit_name(x) for x in norm2]
    # parities are computed on a kappa-free skeleton
    skel = InitialDatum(fam, roots, simple, bullet, lam, lamt, np.zeros((len(roots), 4)), q,
                        den=den, semisimple=ss)
    par = skel.lattice_parity("lam")
    part = skel.lattice_parity("lam_tilde")
    sk_index = {tuple(r): i for i, r in enumerate(skel.roots)}
    table = np.zeros((len(roots), 4))
    for j, r in enumerate(roots):
        name = names[j]
        if isinstance(kappa_values, dict):
            if name in kappa_values:
                val = kappa_values[name]
            elif "*" in kappa_values:
                val = kappa_values["*"]
            elif set(kappa_values) <= set(KAPPA_LABELS):
                val = kappa_values
            else:
                raise DatumError(f"no kappa given for the {name} root orbit")
        else:
            val = kappa_values
        s = sk_index[tuple(r)]
        table[j] = resolve_kappa(val, par[s], part[s])
    return InitialDatum(fam, roots, simple, bullet, lam, lamt, table, q, den=den,
                        semisimple=ss, orbit_names=names)


def dual_datum(D):
    """The dual initial datum (D-tilde, kappa-tilde, q).

    Roots become alpha-tilde, the lattices swap, and the multiplicities
    kappa_{2alpha} and kappa_{alpha^(1)} trade places.
    """
    kt = D.kappa[:, [K, K1, K2, K21]]
    Dt = InitialDatum(D.family, D.tilde, D.tilde[D.simple_index], D.bullet, D.lam_tilde, D.lam,
                      kt, D.q, den=D.den, semisimple=D.semisimple, orbit_names=D.orbit_names)
    if not np.allclose(Dt.roots, D.tilde):
        raise DatumError("internal: dual root ordering mismatch")
    Dt.__dict__["dual"] = D
    return Dt


# -------------------------------------------------------------------- Weyl group
class WeylTable:
    """Enumerated finite Weyl group with multiplication and root actions.

    Elements are indexed in breadth-first order from the identity (index 0),
    so lengths are nondecreasing along the enumeration.
    """

    def __init__(self, D, cap=5000):
        self.D = D
        n, d = D.rank, D.dim
        refl = []
        for i in range(n):
            a = D.simple[i]
            refl.append(np.rint(np.eye(d) - 2.0 * np.outer(a, a) / a.dot(a)).astype(int))
        self.gens = refl
        mats = [np.eye(d, dtype=int)]
        index = {mats[0].tobytes(): 0}
        frontier = [0]
        while frontier:
            nxt = []
            for w in frontier:
                for s in refl:
                    m = s @ mats[w]
                    key = m.tobytes()
                    if key not in index:
                        index[key] = len(mats)
                        mats.append(m)
                        nxt.append(index[key])
                        if len(mats) > cap:
                            raise DatumError("Weyl group exceeds the configured size cap")
            frontier = nxt
        self.mats = np.array(mats)
        self._index = index
        N = len(mats)
        self.mul = np.empty((N, N), dtype=int)
        for a in range(N):
            for b in range(N):
                self.mul[a, b] = index[(self.mats[a] @ self.mats[b]).tobytes()]
        self.inv = np.array([int(np.nonzero(self.mul[a] == 0)[0][0]) for a in range(N)])
        # perm[w, j] = index of w(alpha_j)
        imgs = np.einsum("wij,rj->wri", self.mats, D.roots)
        self.perm = np.array([[D.root_index[tuple(np.rint(v @ np.linalg.pinv(D.simple)).astype(int))]
                               for v in img] for img in imgs])
        self.length = np.array([(~D.positive[self.perm[w, : D.npos]]).sum() for w in range(N)])
        self.simple = [index[s.tobytes()] for s in refl]
        self.longest = int(np.argmax(self.length))
        w0 = self.longest
        self.istar = [int(np.nonzero(D.simple_index == D.neg(self.perm[w0, D.simple_index[i]]))[0][0])
                      for i in range(n)]
        self.reduced_words = [self.reduced_word(w) for w in range(N)]

    def __len__(self):
        return len(self.mats)

    def index(self, mat):
        return self._index[np.asarray(mat, dtype=int).tobytes()]

    def reflection(self, j):
        """Index of the reflection s_alpha for root index ``j``."""
        a = self.D.roots[j]
        m = np.rint(np.eye(self.D.dim) - 2.0 * np.outer(a, a) / a.dot(a)).astype(int)
        return self.index(m)

    def act(self, w, v):
        return self.mats[w] @ np.asarray(v)

    def reduced_word(self, w, order=1):
        """A reduced word (i_1, ..., i_l) with w = s_{i_1} ... s_{i_l}, 0-based indices.

        ``order=-1`` scans descents from the last simple root, producing a
        different reduced word in general.
        """
        D = self.D
        word = []
        cur = w
        rng = range(D.rank) if order > 0 else range(D.rank - 1, -1, -1)
        while self.length[cur] > 0:
            winv = self.inv[cur]
            for i in rng:
                if not D.positive[self.perm[winv, D.simple_index[i]]]:
                    word.append(i)
                    cur = self.mul[self.simple[i], cur]
                    break
        return tuple(word)

    def from_word(self, word):
        w = 0
        for i in word:
            w = self.mul[w, self.simple[i]]
        return w

    def kappa_w(self, w):
        """Sum of kappa_alpha over the inversion set of ``w``."""
        D = self.D
        tot = 0.0
        for j in range(D.npos):
            if not D.positive[self.perm[w, j]]:
                tot += D.kappa[j, K]
        return tot


# ------------------------------------------------------- extended affine Weyl group
@dataclass(frozen=True)
class ExtAffineElement:
    """z -> sigma z + trans/den with ``trans`` integer numerators."""

    trans: tuple
    sigma: int


class AffineWeyl:
    """The extended affine Weyl group W0 x Lambda-tilde of a datum.

    For the dual group W0 x Lambda pass ``D.dual``.
    """

    def __init__(self, D):
        self.D = D
        self.W0 = D.weyl
        self.den = D.den
        d = D.dim
        self.e = ExtAffineElement((0,) * d, 0)
        psi = D.psi
        self.simple_affine = [(D.neg(psi), 1)] + [(int(j), 0) for j in D.simple_index]
        s0 = self.compose(self.translation(D.tilde[psi]), ExtAffineElement((0,) * d, self.W0.reflection(psi)))
        self.s = [s0] + [ExtAffineElement((0,) * d, g) for g in self.W0.simple]

    # -- construction
    def _num(self, v):
        num = np.rint(np.asarray(v, float) * self.den).astype(int)
        if not np.allclose(num / self.den, v, atol=1e-9):
            raise DatumError(f"{v} is not representable over denominator {self.den}")
        return num

    def translation(self, nu, check=True):
        nu = np.asarray(nu, dtype=float)
        if check and not self.D.in_lattice(nu, self.D.lam_tilde):
            raise DatumError(f"{nu.tolist()} is not in the translation lattice")
        return ExtAffineElement(tuple(int(x) for x in self._num(nu)), 0)

    def linear(self, sigma):
        return ExtAffineElement((0,) * self.D.dim, int(sigma))

    def trans_vector(self, g):
        return np.array(g.trans, dtype=float) / self.den

    # -- group law
    def compose(self, g, h):
        t = np.array(g.trans) + self.W0.mats[g.sigma] @ np.array(h.trans)
        return ExtAffineElement(tuple(int(x) for x in t), int(self.W0.mul[g.sigma, h.sigma]))

    def inverse(self, g):
        si = int(self.W0.inv[g.sigma])
        t = -(self.W0.mats[si] @ np.array(g.trans))
        return ExtAffineElement(tuple(int(x) for x in t), si)

    def product(self, *gs):
        out = self.e
        for g in gs:
            out = self.compose(out, g)
        return out

    def act(self, g, z):
        """The point g z = sigma z + mu."""
        return self.W0.mats[g.sigma] @ np.asarray(z, dtype=complex) + self.trans_vector(g)

    def act_root(self, g, a):
        """Action on an affine root a = (root index, r)."""
        D = self.D
        j, r = a
        b = int(self.W0.perm[g.sigma, j])
        m = self.trans_vector(g) @ D.tilde_coroots[b]
        mi = int(round(m))
        if abs(m - mi) > 1e-9:
            raise DatumError("translation pairs non-integrally with a root")
        return (b, r - mi)

    def is_positive(self, a):
        j, r = a
        return r > 0 or (r == 0 and self.D.positive[j])

    # -- length, reduced words
    def inversion_set(self, g):
        """Positive affine roots a with g a negative (finite window count)."""
        D = self.D
        mu = self.trans_vector(g)
        out = []
        for j in range(D.nroots):
            b = int(self.W0.perm[g.sigma, j])
            m = int(round(mu @ D.tilde_coroots[b]))
            start = 0 if D.positive[j] else 1
            for r in range(start, max(m, start - 1) + 1):
                if r < m or (r == m and not D.positive[b]):
                    out.append((j, r))
        return out

    def length(self, g):
        return len(self.inversion_set(g))

    def descent(self, g, order=1):
        """First i with l(s_i g) < l(g), or None."""
        ginv = self.inverse(g)
        rng = range(self.D.rank + 1) if order > 0 else range(self.D.rank, -1, -1)
        for i in rng:
            if not self.is_positive(self.act_root(ginv, self.simple_affine[i])):
                return i
        return None

    def reduced_word(self, g, order=1):
        """(word, omega) with g = s_{i_1} ... s_{i_k} omega and l(omega) = 0.

        Indices are 0..n with 0 the affine simple reflection.
        """
        word = []
        cur = g
        while True:
            i = self.descent(cur, order)
            if i is None:
                return tuple(word), cur
            word.append(i)
            cur = self.compose(self.s[i], cur)
            if len(word) > 10000:
                raise DatumError("descent did not terminate")

    def u_nu(self, nu):
        """(u(nu), v(nu)) with u(nu) of minimal length in tau(nu) W0 and v(nu) in W0."""
        t = self.translation(nu)
        best = None
        for s in range(len(self.W0)):
            g = self.compose(t, self.linear(s))
            l = self.length(g)
            if best is None or l < best[0]:
                best = (l, g)
        u = best[1]
        v = self.compose(self.inverse(u), t)
        return u, v.sigma

    def minuscule_weights(self, box=2):
        """Dominant nu in the lattice with (nu, alpha-tilde^vee) in {0, 1} for alpha > 0."""
        D = self.D
        gens = D.lam_tilde
        out = []
        for c in product(range(-box, box + 1), repeat=len(gens)):
            nu = np.array(c) @ gens
            vals = D.tilde_coroots[: D.npos] @ nu
            if np.all((np.abs(vals) < 1e-9) | (np.abs(vals - 1) < 1e-9)):
                if not any(np.allclose(nu, o) for o in out):
                    out.append(nu)
        return out

    def random_element(self, rng, box=2):
        D = self.D
        c = rng.integers(-box, box + 1, size=len(D.lam_tilde))
        return self.compose(self.translation(c @ D.lam_tilde), self.linear(int(rng.integers(len(self.W0)))))


# ------------------------------------------------------------------ c-functions
def c_affine(D, a, z, sign=1, guard=None):
    """c_a(z) for the affine root a = (root index, r); ``sign=-1`` uses -kappa."""
    guard = resolve_guard(guard)
    j, r = a
    k, k2 = D.kappa_affine(j, r)
    k, k2 = sign * k, sign * k2
    q = D.q
    av = D.mu[j] * r + D.roots[j] @ np.asarray(z, dtype=complex)
    x = q ** av
    den = 1.0 - x * x
    if abs(den) < guard:
        raise SingularPointError(f"c_a pole: |1 - q^(2a(z))| = {abs(den):.2e}", where=a, value=abs(den))
    return (1.0 - q ** (k + k2) * x) * (1.0 + q ** (k - k2) * x) / den


def c_element(D, g, z, sign=1, group=None, guard=None):
    """c_w(z) = product of c_a(z) over positive affine roots a with w a negative."""
    G = group or AffineWeyl(D)
    out = 1.0 + 0j
    for a in G.inversion_set(g):
        out *= c_affine(D, a, z, sign, guard)
    return out
