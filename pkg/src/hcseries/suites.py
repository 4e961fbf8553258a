"""Verification suites: sampled residual checks grouped by topic.

Each suite takes the initial datum, a ``SuiteContext`` (truncation, sample
count, tolerance scale, seeded generator) and returns ``CheckRecord``s.
A suite that does not apply to the configured datum raises
``ConfigError``; ``run_suites`` reports such suites as skipped only when
running ``all``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import cfunction as cf
from . import connection as cn
from . import harish_chandra as hc
from . import qkz
from . import qseries as qs
from .errors import ConfigError, DatumError, SingularPointError


@dataclass
class CheckRecord:
    name: str
    anchor: str
    residual: float
    tolerance: float
    passed: bool
    sample: dict = field(default_factory=dict)
    wall_time: float = 0.0


@dataclass
class SuiteContext:
    seed: int = 0
    samples: int = 5
    truncation: int = 24
    tol_scale: float = 1.0

    def rng(self, suite):
        # independent stream per suite so selection order does not matter
        return np.random.default_rng([self.seed, sum(map(ord, suite))])


def _c(v):
    """Complex scalars and vectors as [re, im] pairs."""
    a = np.asarray(v, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [[float(x.real), float(x.imag)] for x in a]


class _Collector:
    def __init__(self, ctx):
        self.ctx = ctx
        self.records = []

    def add(self, name, anchor, tol, fn, sample, retries=4, resample=None):
        """Evaluate ``fn()`` (a residual); on a pole hit draw a new sample via ``resample``."""
        tol = tol * self.ctx.tol_scale
        t0 = time.perf_counter()
        for attempt in range(retries + 1):
            try:
                res = float(fn(**sample) if resample else fn())
                break
            except SingularPointError:
                if resample is None or attempt == retries:
                    raise
                sample = resample()
        rec = CheckRecord(name, anchor, res, tol, bool(np.isfinite(res) and res < tol),
                          {k: (_c(v) if not isinstance(v, (int, str)) else v) for k, v in sample.items()},
                          time.perf_counter() - t0)
        self.records.append(rec)
        return rec


def _generic(D, rng, scale=0.5, imag=0.3):
    return D.project(scale * rng.normal(size=D.dim) + 1j * imag * rng.normal(size=D.dim))


# ------------------------------------------------------------------ suites
def suite_theta(D, ctx):
    rng = ctx.rng("theta")
    out = _Collector(ctx)

    def fe_case():
        x = np.exp(rng.uniform(np.log(0.2), np.log(5.0)) + 2j * np.pi * rng.random())
        return {"x": x, "r": int(rng.integers(-3, 4)), "q": float(rng.uniform(0.1, 0.9))}

    def unit():
        return np.exp(rng.uniform(-1, 1) + 2j * np.pi * rng.random())

    def rid_case():
        return {"x": unit(), "lam": unit(), "mu": unit(), "nu": unit(), "q": float(rng.uniform(0.1, 0.8))}

    for _ in range(ctx.samples):
        s = fe_case()
        out.add("theta functional equation", "theta-functional-equation", 1e-10, qs.fe_residual, s,
                resample=fe_case)
        s = rid_case()
        out.add("theta addition formula", "theta-addition-formula", 1e-11, qs.rid_residual, s,
                resample=rid_case)
        z = 0.5 * rng.normal(size=D.dim) + 0.3j * rng.normal(size=D.dim)
        out.add("lattice theta triple product", "lattice-theta-triple-product", 1e-10,
                lambda: qs.triple_product_residual(z, D.q), {"z": z})
    return out.records


def suite_eigen(D, ctx):
    rng = ctx.rng("eigen")
    out = _Collector(ctx)
    for _ in range(ctx.samples):
        z, xi = hc.sample_chamber_point(D, rng), hc.sample_chamber_point(D.dual, rng)
        out.add("eigenvalue equation L Phi = E Phi", "eigenvalue-equation", 1e-8,
                lambda z=z, xi=xi: hc.eigen_residual(D, z, xi, ctx.truncation), {"z": z, "xi": xi})
    return out.records


def suite_duality(D, ctx):
    rng = ctx.rng("duality")
    out = _Collector(ctx)
    for _ in range(ctx.samples):
        z, xi = hc.sample_chamber_point(D, rng), hc.sample_chamber_point(D.dual, rng)
        out.add("self-duality Phi(z,xi;D) = Phi(xi,z;D~)", "self-duality", 1e-7,
                lambda z=z, xi=xi: hc.duality_residual(D, z, xi, ctx.truncation), {"z": z, "xi": xi})
    return out.records


def _wall_point(D, i, rng):
    """z with alpha_i(z) near the wall and the other simple roots deep in the chamber."""
    tg = -1.5 + 0.2 * rng.random(D.rank) + 0.2j * (rng.random(D.rank) - 0.5)
    tg[i] = rng.uniform(0.1, 0.3) + 0.2j * (rng.random() - 0.5)
    return np.linalg.lstsq(D.simple, tg, rcond=None)[0]


def suite_connection(D, ctx):
    rng = ctx.rng("connection")
    out = _Collector(ctx)
    for i in range(D.rank):
        for _ in range(ctx.samples):
            xi = hc.sample_chamber_point(D.dual, rng)
            if D.rank == 1:
                x = complex(rng.uniform(0.2, 0.5) + 0.3j * (rng.random() - 0.5))
                out.add(f"connection identity (rank one, i={i + 1})", "connection-identity", 1e-9,
                        lambda x=x, xi=xi: cn.connection_identity_rank_one(D, i, x, xi), {"x": x, "xi": xi})
            else:
                z = _wall_point(D, i, rng)
                out.add(f"connection identity (truncated, i={i + 1})", "connection-identity", 1e-6,
                        lambda z=z, xi=xi: cn.connection_identity_residual(D, i, z, xi, ctx.truncation),
                        {"z": z, "xi": xi})
    return out.records


def suite_cocycle(D, ctx):
    """Connection matrix structure: word independence, lattice periodicity, simplified entries."""
    rng = ctx.rng("cocycle")
    out = _Collector(ctx)
    W = D.weyl
    for _ in range(ctx.samples):
        z, xi = _generic(D, rng), _generic(D.dual, rng)
        w0 = W.longest
        words = {W.reduced_word(w0, 1), W.reduced_word(w0, -1)}
        if len(words) > 1:
            a, b = (cn.connection_matrix(D, w0, z, xi, word=wd).value for wd in words)
            out.add("connection cocycle word independence", "connection-cocycle", 1e-9,
                    lambda a=a, b=b: np.max(np.abs(a - b)) / np.max(np.abs(a)), {"z": z, "xi": xi})
        for i in range(D.rank):
            base = np.array(cn.m_simple(D, i, z, xi))
            for nu in D.lam_tilde:
                out.add(f"lattice invariance of m entries in z (i={i + 1})", "connection-periodicity", 1e-9,
                        lambda nu=nu: np.max(np.abs(np.array(cn.m_simple(D, i, z + nu, xi)) - base))
                        / np.max(np.abs(base)), {"z": z, "xi": xi, "shift": nu})
            for lam in D.lam:
                out.add(f"lattice invariance of m entries in xi (i={i + 1})", "connection-periodicity", 1e-9,
                        lambda lam=lam: np.max(np.abs(np.array(cn.m_simple(D, i, z, xi + lam)) - base))
                        / np.max(np.abs(base)), {"z": z, "xi": xi, "shift": lam})
            if D.case(int(D.simple_index[i])) == "q-ultraspherical":
                simp = np.array(cn.m_ultraspherical(D, i, z, xi))
                out.add(f"simplified q-ultraspherical entries (i={i + 1})", "ultraspherical-entries", 1e-11,
                        lambda simp=simp, base=base: np.max(np.abs(simp - base)) / np.max(np.abs(base)),
                        {"z": z, "xi": xi})
    return out.records


def suite_yb(D, ctx):
    if D.family != "B" or D.rank != 3:
        raise ConfigError("the yb suite needs the B3 Koornwinder datum")
    rng = ctx.rng("yb")
    out = _Collector(ctx)
    for _ in range(ctx.samples):
        z, xi = _generic(D, rng, 1.0, 1.0), _generic(D, rng, 1.0, 1.0)
        out.add("dynamical Yang-Baxter equation", "dynamical-yang-baxter", 1e-8,
                lambda z=z, xi=xi: np.divide(*cn.yb_residual(D, 0, z, xi)), {"z": z, "xi": xi})
        out.add("dynamical reflection equation", "dynamical-reflection", 1e-8,
                lambda z=z, xi=xi: np.divide(*cn.reflection_residual(D, z, xi)), {"z": z, "xi": xi})
    return out.records


def suite_reflectionless(D, ctx):
    ok, _ = cn.reflectionless_predicate(D)
    if not ok:
        raise ConfigError("the reflectionless suite needs multiplicities meeting the integrality conditions")
    rng = ctx.rng("reflectionless")
    out = _Collector(ctx)
    N = max(ctx.truncation, 32)
    for _ in range(ctx.samples):
        tg = rng.uniform(-0.12 / D.rank, 0, D.rank) + 1j * rng.uniform(-0.3, 0.3, D.rank)
        z = np.linalg.lstsq(D.simple, tg, rcond=None)[0]
        xi = hc.sample_chamber_point(D.dual, rng)
        for i in range(D.rank):
            mee, moff = cn.m_simple(D, i, z, xi)
            out.add(f"m_ee vanishes (i={i + 1})", "reflectionless", 1e-10, lambda mee=mee: abs(mee),
                    {"z": z, "xi": xi})
            out.add(f"m_off equals one (i={i + 1})", "reflectionless", 1e-10, lambda moff=moff: abs(moff - 1),
                    {"z": z, "xi": xi})
        w = int(rng.integers(1, len(D.weyl)))
        out.add("Phi(wz, w0 w w0 xi) = Phi(z, xi)", "reflectionless-invariance", 1e-7,
                lambda z=z, xi=xi, w=w: hc.phi_invariance_residual(D, w, z, xi, N), {"z": z, "xi": xi, "w": w})
    return out.records


def dominant_lattice_vectors(D):
    """Dominant generators of Lambda (with respect to the dual datum) plus the highest short root."""
    from .operators import is_dominant
    cands = [np.asarray(v, float) for v in D.lam] + [D.roots[D.theta]]
    out = []
    for v in cands:
        if D.in_lattice(v, D.lam) and is_dominant(D.dual, v) and not any(np.allclose(v, u) for u in out):
            out.append(v)
    return out


def suite_qkz(D, ctx):
    rng = ctx.rng("qkz")
    out = _Collector(ctx)
    Q = qkz.QKZCocycle(D)
    for _ in range(ctx.samples):
        z, xi = _generic(D, rng, 1.0), _generic(D, rng, 1.0)
        s = {"z": z, "xi": xi}
        for side in ("left", "dual"):
            for i in range(D.rank + 1):
                out.add(f"C_s C_s = I ({side}, i={i})", "qkz-quadratic", 1e-11,
                        lambda i=i, side=side: qkz.quadratic_residual(D, i, z, xi, side), s)
        br = qkz.braid_residuals(D, z, xi)
        if br:
            out.add("braid relations of the generators", "qkz-braid", 1e-10, lambda: max(br.values()), s)
        w, wt = Q.G.random_element(rng), Q.Gt.random_element(rng)
        v, vt = Q.G.random_element(rng), Q.Gt.random_element(rng)
        out.add("reduced word independence", "qkz-cocycle", 1e-10,
                lambda: qkz.word_independence_residual(D, w, wt, z, xi, split=(v, vt)), s)
        out.add("duality symmetry", "qkz-duality-symmetry", 1e-10,
                lambda: qkz.duality_residual(D, w, wt, z, xi), s)
        nu = D.lam_tilde[int(rng.integers(len(D.lam_tilde)))]
        lam = D.lam[int(rng.integers(len(D.lam)))]
        out.add("bispectral compatibility", "qkz-compatibility", 1e-10,
                lambda: qkz.bispectral_compatibility_residual(D, nu, lam, z, xi), s)
        f = qkz.RationalVectorFunction(D, rng)
        g1, g2 = (Q.G.random_element(rng), Q.Gt.random_element(rng)), (Q.G.random_element(rng),
                                                                       Q.Gt.random_element(rng))
        out.add("nabla is a group action", "qkz-nabla-action", 1e-10,
                lambda: qkz.nabla_action_residual(D, g1, g2, f, z, xi), s)
        g = (Q.G.linear(int(rng.integers(len(D.weyl)))), Q.Gt.linear(int(rng.integers(len(D.weyl)))))
        out.add("chi is W0 x W0 equivariant", "cherednik-matsuo-map", 1e-10,
                lambda: qkz.chi_equivariance_residual(D, g, f, z, xi), s)
        xs = _generic(D, rng, 0.5)
        for lam in dominant_lattice_vectors(D):
            out.add(f"r_lambda^(0) product (lambda={np.round(lam, 4).tolist()})", "qkz-r0-product", 1e-7,
                    lambda lam=lam, xs=xs: qkz.verify_r0(D, lam, xs, 30.0), {"xi": xs, "lam": lam})
    return out.records


def suite_cfun(D, ctx):
    cf.require_twisted_equal_lattice(D)
    rng = ctx.rng("cfun")
    out = _Collector(ctx)
    Xi = lambda a, b: cf.xi_sph(D, a, b)
    csph = lambda a, b: cf.c_sph(D, a, b)
    par = D.lattice_parity("lam")
    for _ in range(ctx.samples):
        z, xi = _generic(D, rng, 0.4), _generic(D, rng, 0.4)
        s = {"z": z, "xi": xi}
        out.add("Xi_sph quasi-invariance", "xi-quasi-invariance", 1e-10,
                lambda: cf.quasiinvariance_residual(D, Xi, z, xi), s)
        if cf.all_integral(D):
            out.add("integral branch of c_sph", "c-sph-branches", 1e-11,
                    lambda: abs(cf.c_sph(D, z, xi) - cf.c_sph_integral(D, z, xi)) / abs(cf.c_sph(D, z, xi)), s)
        for i in range(D.rank):
            out.add(f"c_sph consistency equations (i={i + 1})", "c-function-consistency", 1e-8,
                    lambda i=i: cf.consistency_residual(D, csph, i, z, xi), s)
            if par[int(D.simple_index[i])] == 1:
                out.add(f"higher rank addition formula (i={i + 1})", "higher-rank-addition", 1e-8,
                        lambda i=i: cf.addition_root_residual(D, i, z, xi), s)
        if D.family == "B":
            out.add("Xi_sph reflection laws at i=n", "xi-reflection-laws", 1e-8,
                    lambda: cf.reflection_laws_residual(D, Xi, D.rank - 1, z, xi), s)
    return out.records


def suite_gammahat(D, ctx):
    try:
        hc.ba_box(D)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if not D.semisimple:
        raise ConfigError("the gammahat suite needs a semisimple datum")
    rng = ctx.rng("gammahat")
    out = _Collector(ctx)
    N = min(ctx.truncation, 20)
    for _ in range(ctx.samples):
        xi = hc.sample_chamber_point(D.dual, rng)
        out.add("Gamma^ vanishes outside the box", "gamma-hat-vanishing", 1e-9,
                lambda xi=xi: hc.gamma_hat_outside_box(D, xi, N), {"xi": xi})
    return out.records


SUITES = {
    "theta": suite_theta,
    "eigen": suite_eigen,
    "duality": suite_duality,
    "connection": suite_connection,
    "cocycle": suite_cocycle,
    "yb": suite_yb,
    "reflectionless": suite_reflectionless,
    "qkz": suite_qkz,
    "cfun": suite_cfun,
    "gammahat": suite_gammahat,
}


def run_suites(D, names, ctx):
    """Returns (records, skipped) where ``skipped`` maps suite name to the reason."""
    expand = list(SUITES) if "all" in names else list(names)
    unknown = [n for n in expand if n not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
    records, skipped = [], {}
    for name in expand:
        try:
            recs = SUITES[name](D, ctx)
        except (ConfigError, DatumError) as e:
            if "all" in names:
                skipped[name] = str(e)
                continue
            raise ConfigError(f"suite {name!r}: {e}") from None
        for r in recs:
            r.name = f"{name}: {r.name}"
        records.extend(recs)
    return records, skipped
