import numpy as np

from hcseries import build_datum
from hcseries import connection as cn
from conftest import REFLECTIONLESS_KAPPA


def test_wronskian_oracle_matches_theta_formula(b1):
    # n_pm from Wronskians of closed-form solutions is independent of the theta expression
    rng = np.random.default_rng(7)
    for _ in range(3):
        # the reflected and shifted closed forms all converge only for Re x in about [0.4, 0.6]
        x = complex(rng.uniform(0.4, 0.6) + 0.1j * (rng.random() - 0.5))
        xi = np.array([-0.8 + 0.2j * rng.random()])
        y = b1.tilde[b1.simple_index[0]] @ xi
        a = np.array(cn.m_wronskian(b1, 0, x, xi))
        b = np.array(cn.n_pm(b1, 0, x, y))
        assert np.max(np.abs(a - b) / np.abs(b)) < 1e-9


def test_wronskian_closed_form(b1):
    from hcseries.harish_chandra import phi_rank_one
    x, xi = 0.3 + 0.1j, np.array([-0.7 + 0.1j])
    sxi = -xi
    f = lambda t: phi_rank_one(b1, 0, t, xi)
    g = lambda t: phi_rank_one(b1, 0, t, sxi)
    w = cn.wronskian(b1, 0, f, g, x)
    assert abs(w - cn.wronskian_closed_form(b1, 0, x, xi)) / abs(w) < 1e-9


def test_connection_matrix_cocycle_words(b2):
    rng = np.random.default_rng(8)
    W = b2.weyl
    z, xi = rng.normal(size=2) + 0.3j, rng.normal(size=2) - 0.2j
    a = cn.connection_matrix(b2, W.longest, z, xi, word=W.reduced_word(W.longest, 1)).value
    b = cn.connection_matrix(b2, W.longest, z, xi, word=W.reduced_word(W.longest, -1)).value
    assert np.max(np.abs(a - b)) / np.max(np.abs(a)) < 1e-12


def test_reflectionless_predicate():
    ok, cert = cn.reflectionless_predicate(build_datum("B", 2, "t", REFLECTIONLESS_KAPPA, 0.3))
    assert ok and set(cert) == {"long", "short"}
    ok, _ = cn.reflectionless_predicate(build_datum("B", 2, "t", {"*": 0.21}, 0.3))
    assert not ok
