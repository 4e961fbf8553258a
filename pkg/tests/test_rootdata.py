import numpy as np
import pytest

from hcseries import build_datum
from hcseries.errors import DatumError
from hcseries.rootdata import AffineWeyl, c_affine


@pytest.mark.parametrize("family,rank,bullet,order", [
    ("A", 1, "t", 2), ("A", 2, "u", 6), ("GL", 1, "u", 2), ("GL", 2, "u", 6), ("B", 2, "t", 8), ("B", 3, "t", 48),
])
def test_weyl_group_orders(family, rank, bullet, order):
    kappa = 0.2 if family != "B" else {"*": 0.2}
    D = build_datum(family, rank, bullet, kappa, 0.3)
    assert len(D.weyl) == order


def test_reduced_words_are_reduced(b3):
    W = b3.weyl
    for w in range(len(W)):
        for order in (1, -1):
            word = W.reduced_word(w, order)
            assert len(word) == W.length[w]
            assert W.from_word(word) == w
    assert W.length[W.longest] == b3.npos


def test_positive_roots_and_rho(b2):
    D = b2
    assert D.npos == 4 and D.nroots == 8
    assert np.allclose(D.roots[D.npos:], -D.roots[: D.npos])
    # rho is strictly dominant for positive multiplicities
    assert np.all(D.coroots[: D.npos] @ D.rho > 0)


def test_dual_of_dual_is_original(b2, gl2):
    for D in (b2, gl2):
        DD = D.dual.dual
        assert np.allclose(DD.roots, D.roots)
        assert np.allclose(DD.kappa, D.kappa)
        assert np.allclose(DD.lam, D.lam)


def test_affine_group_relations(a2):
    G = AffineWeyl(a2)
    for s in G.s:
        assert G.compose(s, s) == G.e
    nu = a2.lam_tilde[0]
    t = G.translation(nu)
    assert G.compose(t, G.inverse(t)) == G.e
    assert np.allclose(G.act(t, np.zeros(a2.dim)), nu)


def test_c_affine_pole_guard(a1):
    G = AffineWeyl(a1)
    with pytest.raises(Exception):
        c_affine(a1, G.simple_affine[1], np.zeros(a1.dim))


@pytest.mark.parametrize("args", [
    ("B", 2, "u", 0.2, 0.3),        # Koornwinder needs bullet t
    ("A", 5, "u", 0.2, 0.3),        # unsupported rank
    ("A", 1, "u", 0.2, 1.5),        # q outside (0, 1)
    ("C", 2, "u", 0.2, 0.3),        # unknown family
])
def test_invalid_datum(args):
    with pytest.raises(DatumError):
        build_datum(*args)
