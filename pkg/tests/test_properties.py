"""Property-based checks over randomly drawn arguments and multiplicities."""
import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from hcseries import build_datum
from hcseries import harish_chandra as hc
from hcseries import qkz
from hcseries import qseries as qs
from hcseries.connection import m_simple

qvals = st.floats(0.1, 0.8)
phase = st.floats(0, 2 * np.pi)
modulus = st.floats(0.3, 3.0)
kap = st.floats(0.05, 0.45)
small = st.floats(-0.6, 0.6)
quick = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@quick
@given(modulus, phase, st.integers(-5, 5), qvals)
def test_theta_functional_equation(r_, t, k, q):
    assert qs.fe_residual(r_ * np.exp(1j * t), k, q) < 1e-10


@quick
@given(modulus, phase, qvals)
def test_theta_inversion(r_, t, q):
    x = r_ * np.exp(1j * t)
    assert abs(qs.theta(q / x, q) - qs.theta(x, q)) <= 1e-12 * max(1.0, abs(qs.theta(x, q)))


@quick
@given(st.lists(modulus, min_size=4, max_size=4), st.lists(phase, min_size=4, max_size=4), st.floats(0.1, 0.7))
def test_theta_addition(mods, phases, q):
    x, lam, mu, nu = (m * np.exp(1j * p) for m, p in zip(mods, phases))
    assert qs.rid_residual(x, lam, mu, nu, q) < 1e-10


@quick
@given(kap, kap, st.floats(0.2, 0.5), small, small)
def test_rank_one_series_matches_closed_form(k1, k2, q, u, v):
    D = build_datum("B", 1, "t", {"short": {"alpha": k1, "2alpha": k2, "alpha1": 0.2, "2alpha1": 0.1}}, q)
    z = np.array([-1.0 + 0.5 * u + 0.3j * v])
    xi = np.array([-0.9 + 0.3 * v + 0.3j * u])
    a = hc.phi(D, z, xi, 30)
    b = hc.phi_rank_one(D, 0, D.simple[0] @ z, xi)
    assert abs(a - b) / abs(b) < 1e-8


@quick
@given(kap, st.floats(0.2, 0.5), small, small, small, small)
def test_m_entries_lattice_periodic(k, q, a, b, c, d):
    D = build_datum("A", 2, "u", k, q)
    z = D.project(np.array([a + 0.2j, b - 0.1j, c]))
    xi = D.project(np.array([d, a + 0.1j, -b]))
    base = np.array(m_simple(D, 0, z, xi))
    for nu in D.lam_tilde:
        assert np.max(np.abs(np.array(m_simple(D, 0, z + nu, xi)) - base) / np.abs(base)) < 1e-9


@quick
@given(kap, st.floats(0.2, 0.5), small, small, small, small)
def test_qkz_generators_involutive(k, q, a, b, c, d):
    D = build_datum("GL", 2, "u", k, q)
    z = np.array([a + 0.3j, b, c - 0.2j])
    xi = np.array([d, a - 0.1j, b + c])
    for side in ("left", "dual"):
        for i in range(D.rank + 1):
            assert qkz.quadratic_residual(D, i, z, xi, side) < 1e-10
