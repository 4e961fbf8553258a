"""Acceptance criteria: one test per criterion with its tolerance and runtime budget.

Each test records a summary line that the terminal summary prints as
"criterion N PASS/FAIL ...".
"""
import time

import numpy as np

from conftest import REFLECTIONLESS_KAPPA, record
from hcseries import build_datum
from hcseries import cfunction as cf
from hcseries import connection as cn
from hcseries import harish_chandra as hc
from hcseries import qkz
from hcseries import qseries as qs
from hcseries.operators import (RationalTestFunction, demazure_lusztig, hecke_parameter, identity_residual,
                                is_dominant, l_explicit, rmkc_extract, y_operator)
from hcseries.rootdata import AffineWeyl, c_element
from hcseries.series import a_function
from hcseries.suites import dominant_lattice_vectors


def _finish(number, title, checks, elapsed, budget):
    """``checks``: list of (label, residual, tolerance); ``elapsed``/``budget`` may be parallel lists."""
    times = list(zip(np.atleast_1d(elapsed), np.atleast_1d(budget)))
    ok = all(np.isfinite(r) and r < t for _, r, t in checks) and all(e < b for e, b in times)
    worst = ", ".join(f"{lab} {r:.1e}<{t:.0e}" for lab, r, t in checks)
    record(number, title, ok, worst + "; " + ", ".join(f"{e:.1f}s<{b:g}s" for e, b in times))
    for lab, r, t in checks:
        assert r < t, f"{lab}: residual {r:.3e} >= {t:.1e}"
    for e, b in times:
        assert e < b, f"runtime {e:.1f}s exceeds {b}s"


def _pt(D, target):
    return np.linalg.lstsq(D.simple, np.asarray(target, dtype=complex), rcond=None)[0]


def test_criterion_01_theta_functional_equation():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        x = np.exp(rng.uniform(np.log(0.2), np.log(5.0)) + 2j * np.pi * rng.random())
        worst = max(worst, qs.fe_residual(x, int(rng.integers(-4, 5)), float(rng.uniform(0.05, 0.95))))
    _finish(1, "theta functional equation", [("max rel", worst, 1e-10)], time.perf_counter() - t0, 1.0)


def test_criterion_02_theta_addition_formula():
    rng = np.random.default_rng(2)
    unit = lambda: np.exp(rng.uniform(-1, 1) + 2j * np.pi * rng.random())
    t0 = time.perf_counter()
    worst = max(qs.rid_residual(unit(), unit(), unit(), unit(), float(rng.uniform(0.05, 0.8)))
                for _ in range(100))
    _finish(2, "theta addition formula", [("max rel", worst, 1e-11)], time.perf_counter() - t0, 1.0)


def test_criterion_03_lattice_theta_triple_product(b2, b3):
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    checks = []
    for D in (b2, b3):
        worst = max(qs.triple_product_residual(0.6 * rng.normal(size=D.dim) + 0.4j * rng.normal(size=D.dim), D.q)
                    for _ in range(20))
        checks.append((f"B{D.rank}", worst, 1e-10))
    _finish(3, "Jacobi triple product for the lattice theta function", checks, time.perf_counter() - t0, 5.0)


def test_criterion_04_rank_one_oracle():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(2):
        k = rng.uniform(0.05, 0.45, 5)
        D = build_datum("B", 1, "t", {"short": {"alpha": k[0], "2alpha": k[1], "alpha1": k[2], "2alpha1": k[3]}},
                        float(rng.uniform(0.2, 0.5)))
        for _ in range(10):
            z, xi = hc.sample_chamber_point(D, rng), hc.sample_chamber_point(D.dual, rng)
            a = hc.phi(D, z, xi, 30)
            b = hc.phi_rank_one(D, 0, D.simple[0] @ z, xi)
            worst = max(worst, abs(a - b) / abs(b))
    _finish(4, "series vs 8W7 closed form in rank one", [("max rel", worst, 1e-8)], time.perf_counter() - t0, 10.0)


def test_criterion_05_eigenvalue_equation(gl2, b2):
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    checks = []
    for D in (gl2, b2):
        pts = [(hc.sample_chamber_point(D, rng), hc.sample_chamber_point(D.dual, rng)) for _ in range(4)]
        res = [max(hc.eigen_residual(D, z, xi, N) for z, xi in pts) for N in (8, 16, 24)]
        checks.append((f"{D.family}{D.rank} N=24", res[-1], 1e-8))
        # strict decay until the rounding floor is reached
        decays = all(b < a or b < 1e-13 for a, b in zip(res, res[1:]))
        checks.append((f"{D.family}{D.rank} decay {'/'.join(f'{r:.0e}' for r in res)}", 0.0 if decays else 1.0,
                       0.5))
    _finish(5, "eigenvalue equation", checks, time.perf_counter() - t0, 60.0)


def test_criterion_06_c_tau_psi_and_extracted_operator(a2, b2):
    rng = np.random.default_rng(6)
    t0 = time.perf_counter()
    worst = 0.0
    for D in (a2, b2):
        G = AffineWeyl(D)
        t = G.translation(D.psi_tilde)
        for _ in range(25):
            z = D.project(0.7 * rng.normal(size=D.dim) + 0.7j * rng.normal(size=D.dim))
            A = a_function(D, z)
            worst = max(worst, abs(c_element(D, t, z, group=G) - A) / abs(A))
    t1 = time.perf_counter()
    lres = 0.0
    for D in (a2, b2):
        G = AffineWeyl(D)
        L1, L2 = rmkc_extract(D, D.psi_tilde, G), l_explicit(D, G)
        f = RationalTestFunction(D.dim, D.q, rng)
        for _ in range(3):
            z = 0.7 * rng.normal(size=D.dim) + 0.7j * rng.normal(size=D.dim)
            lres = max(lres, identity_residual(L1, L2, f, z))
    t2 = time.perf_counter()
    _finish(6, "c_tau(psi~) = A and extracted L", [("c = A (50 pts)", worst, 1e-12), ("L extracted", lres, 1e-10)],
            [t1 - t0, t2 - t1], [1.0, 30.0])


def test_criterion_07_operator_algebra(a2, b2):
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    checks = []
    for D in (a2, b2):
        G = AffineWeyl(D)
        f = RationalTestFunction(D.dim, D.q, rng)
        pts = [0.7 * rng.normal(size=D.dim) + 0.7j * rng.normal(size=D.dim) for _ in range(3)]
        worst = lambda lhs, rhs: max(identity_residual(lhs, rhs, f, z) for z in pts)
        T = [demazure_lusztig(D, i, G) for i in range(D.rank + 1)]
        hecke = 0.0
        for i, Ti in enumerate(T):
            k = hecke_parameter(D, i, G)
            rhs = (D.q ** k - D.q ** (-k)) * Ti + G_identity(G)
            hecke = max(hecke, worst(Ti @ Ti, rhs))
        m = 3 if D.family == "A" else 4
        w1 = [T[1], T[2]] * m
        w2 = [T[2], T[1]] * m
        braid = worst(_prod(w1[:m]), _prod(w2[:m]))
        g0, g1 = D.lam_tilde[0], D.lam_tilde[1]
        Y0, Y1 = y_operator(D, g0, G), y_operator(D, g1, G)
        ycomm = worst(Y0 @ Y1, Y1 @ Y0)
        L = l_explicit(D, G)
        nu2 = g0 if D.family == "A" else g0 + g1
        assert is_dominant(D, nu2)
        L2 = rmkc_extract(D, nu2, G)
        lcomm = worst(L @ L2, L2 @ L)
        W = D.weyl
        equiv = 0.0
        for w in range(len(W)):
            M = W.mats[w]
            fw = lambda z, M=M: f(M @ z)
            for z in pts:
                a, s = L2.apply(fw, z, full_output=True)
                b, s2 = L2.apply(f, M @ z, full_output=True)
                equiv = max(equiv, abs(a - b) / max(s, s2))
        name = f"{D.family}{D.rank}"
        checks += [(f"{name} Hecke", hecke, 1e-10), (f"{name} braid", braid, 1e-10),
                   (f"{name} [Y,Y]", ycomm, 1e-10), (f"{name} [L,L]", lcomm, 1e-10),
                   (f"{name} W0-equivariance", equiv, 1e-10)]
    _finish(7, "operator algebra", checks, time.perf_counter() - t0, 60.0)


def G_identity(G):
    from hcseries.operators import DiffReflOp
    return DiffReflOp.identity(G)


def _prod(ops):
    out = ops[0]
    for op in ops[1:]:
        out = out @ op
    return out


def test_criterion_08_connection_identity(a1, b2):
    rng = np.random.default_rng(8)
    t0 = time.perf_counter()
    exact = 0.0
    for _ in range(10):
        xi = hc.sample_chamber_point(a1.dual, rng)
        x = complex(rng.uniform(0.2, 0.5) + 0.3j * (rng.random() - 0.5))
        exact = max(exact, cn.connection_identity_rank_one(a1, 0, x, xi))
    checks = [("rank one exact", exact, 1e-9)]
    xi = _pt(b2.dual, [-1.2 + 0.3j, -0.9 - 0.2j])
    for i in range(2):
        tg = [-1.5 + 0.2j, -1.5 - 0.1j]
        tg[i] = 0.3 + 0.2j
        z = _pt(b2, tg)
        res = [cn.connection_identity_residual(b2, i, z, xi, N) for N in (8, 16, 24)]
        checks.append((f"B2 i={i + 1} N=24", res[-1], 1e-6))
        decays = res[0] > res[1] > res[2]
        checks.append((f"B2 i={i + 1} decay {'/'.join(f'{r:.0e}' for r in res)}", 0.0 if decays else 1.0, 0.5))
    _finish(8, "connection identity", checks, time.perf_counter() - t0, 120.0)


def test_criterion_09_connection_matrix_structure(gl2, a2, b2):
    rng = np.random.default_rng(9)
    t0 = time.perf_counter()
    sparse = simp = period = 0.0
    for D in (gl2, a2, b2):
        W = D.weyl
        for _ in range(3):
            z = D.project(rng.normal(size=D.dim) + 1j * rng.normal(size=D.dim))
            xi = D.project(rng.normal(size=D.dim) + 1j * rng.normal(size=D.dim))
            for i in range(D.rank):
                M = cn.simple_matrix(D, i, z, xi)
                sis = W.simple[W.istar[i]]
                mask = np.ones_like(M, dtype=bool)
                for t2 in range(len(W)):
                    mask[t2, t2] = mask[W.mul[t2, sis], t2] = False
                sparse = max(sparse, float(np.abs(M[mask]).max(initial=0.0)))
                base = np.array(cn.m_simple(D, i, z, xi))
                if D.case(int(D.simple_index[i])) == "q-ultraspherical":
                    u = np.array(cn.m_ultraspherical(D, i, z, xi))
                    simp = max(simp, float(np.max(np.abs(u - base) / np.abs(base))))
                for nu in D.lam_tilde:
                    period = max(period, float(np.max(np.abs(np.array(cn.m_simple(D, i, z + nu, xi)) - base)
                                                      / np.abs(base))))
                for lam in D.lam:
                    period = max(period, float(np.max(np.abs(np.array(cn.m_simple(D, i, z, xi + lam)) - base)
                                                      / np.abs(base))))
    _finish(9, "connection matrix structure",
            [("sparsity", sparse, 1e-300), ("q-ultraspherical entries", simp, 1e-11), ("lattice invariance", period, 1e-9)],
            time.perf_counter() - t0, 10.0)


def test_criterion_10_yang_baxter_and_reflection(b3):
    rng = np.random.default_rng(10)
    t0 = time.perf_counter()
    yb = refl = 0.0
    for _ in range(10):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        xi = rng.normal(size=3) + 1j * rng.normal(size=3)
        # (alpha_1, alpha_2) is the only simple pair with braid length three
        d, n = cn.yb_residual(b3, 0, z, xi)
        yb = max(yb, d / n)
        d, n = cn.reflection_residual(b3, z, xi)
        refl = max(refl, d / n)
    _finish(10, "dynamical Yang-Baxter and reflection equations",
            [("Yang-Baxter", yb, 1e-8), ("reflection", refl, 1e-8)], time.perf_counter() - t0, 30.0)


def test_criterion_11_reflectionless():
    D = build_datum("B", 2, "t", REFLECTIONLESS_KAPPA, 0.3)
    rng = np.random.default_rng(11)
    t0 = time.perf_counter()
    ok, _ = cn.reflectionless_predicate(D)
    assert ok
    mee = moff = inv = 0.0
    for _ in range(4):
        z = _pt(D, rng.uniform(-0.06, 0, 2) + 1j * rng.uniform(-0.3, 0.3, 2))
        xi = hc.sample_chamber_point(D.dual, rng)
        for i in range(2):
            a, b = cn.m_simple(D, i, z, xi)
            mee, moff = max(mee, abs(a)), max(moff, abs(b - 1))
        inv = max(inv, max(hc.phi_invariance_residual(D, w, z, xi, 32) for w in range(1, len(D.weyl))))
    _finish(11, "reflectionless degeneration",
            [("|m_ee|", mee, 1e-10), ("|m_off - 1|", moff, 1e-10), ("Phi invariance", inv, 1e-7)],
            time.perf_counter() - t0, 60.0)


def test_criterion_12_qkz_cocycle(gl2, a2, b2):
    rng = np.random.default_rng(12)
    t0 = time.perf_counter()
    word = dual = r0 = 0.0
    for D in (gl2, a2, b2):
        Q = qkz.QKZCocycle(D)
        for _ in range(3):
            z = D.project(rng.normal(size=D.dim) + 1j * rng.normal(size=D.dim))
            xi = D.project(rng.normal(size=D.dim) + 1j * rng.normal(size=D.dim))
            w, wt = Q.G.random_element(rng), Q.Gt.random_element(rng)
            word = max(word, qkz.word_independence_residual(D, w, wt, z, xi))
            dual = max(dual, qkz.duality_residual(D, w, wt, z, xi))
        xs = D.project(0.5 * rng.normal(size=D.dim) + 0.3j * rng.normal(size=D.dim))
        for lam in dominant_lattice_vectors(D):
            r0 = max(r0, qkz.verify_r0(D, lam, xs, 30.0))
    _finish(12, "quantum KZ cocycle",
            [("word independence", word, 1e-10), ("duality symmetry", dual, 1e-10), ("r_lambda^(0)", r0, 1e-7)],
            time.perf_counter() - t0, 60.0)


def test_criterion_13_quantum_c_function(b2c):
    D = b2c
    rng = np.random.default_rng(13)
    t0 = time.perf_counter()
    rel = alt = 0.0
    csph = lambda a, b: cf.c_sph(D, a, b)
    Xi = lambda a, b: cf.xi_sph(D, a, b)
    for _ in range(5):
        z = 0.4 * rng.normal(size=2) + 0.3j * rng.normal(size=2)
        xi = 0.4 * rng.normal(size=2) + 0.3j * rng.normal(size=2)
        rel = max(rel, max(cf.consistency_residual(D, csph, i, z, xi) for i in range(2)))
        alt = max(alt, cf.reflection_laws_residual(D, Xi, D.rank - 1, z, xi))
    _finish(13, "quantum c-function", [("consistency equations", rel, 1e-8), ("reflection laws at i=n", alt, 1e-8)],
            time.perf_counter() - t0, 60.0)


def test_criterion_14_higher_rank_addition(b2c):
    D = b2c
    rng = np.random.default_rng(14)
    t0 = time.perf_counter()
    par = D.lattice_parity("lam")
    idx = [i for i in range(D.rank) if par[int(D.simple_index[i])] == 1]
    assert idx
    worst = 0.0
    for _ in range(10):
        z = 0.5 * rng.normal(size=2) + 0.3j * rng.normal(size=2)
        xi = 0.5 * rng.normal(size=2) + 0.3j * rng.normal(size=2)
        worst = max(worst, max(cf.addition_root_residual(D, i, z, xi) for i in idx))
    _finish(14, "higher rank addition formula", [("max rel", worst, 1e-8)], time.perf_counter() - t0, 30.0)


def test_criterion_15_gamma_hat_box():
    D = build_datum("A", 1, "u", -0.5, 0.3)
    rng = np.random.default_rng(15)
    t0 = time.perf_counter()
    worst = max(hc.gamma_hat_outside_box(D, hc.sample_chamber_point(D.dual, rng), 20) for _ in range(5))
    _finish(15, "Gamma^ vanishing box", [("outside box", worst, 1e-9)], time.perf_counter() - t0, 30.0)


def test_criterion_16_self_duality(a1, gl2, a2, b2):
    rng = np.random.default_rng(16)
    t0 = time.perf_counter()
    checks = []
    for D in (a1, gl2, a2, b2):
        worst = max(hc.duality_residual(D, hc.sample_chamber_point(D, rng), hc.sample_chamber_point(D.dual, rng), 24)
                    for _ in range(20))
        checks.append((f"{D.family}{D.rank}", worst, 1e-7))
    _finish(16, "self-duality", checks, time.perf_counter() - t0, 120.0)
