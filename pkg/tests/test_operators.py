import numpy as np
import pytest

from hcseries.errors import DatumError
from hcseries.operators import (DiffReflOp, RationalTestFunction, demazure_lusztig, demazure_lusztig_inverse,
                                dominant_split, identity_residual, is_dominant, y_operator)
from hcseries.rootdata import AffineWeyl


def test_inverse_demazure_lusztig(b2):
    G = AffineWeyl(b2)
    rng = np.random.default_rng(9)
    f = RationalTestFunction(b2.dim, b2.q, rng)
    I = DiffReflOp.identity(G)
    for i in range(3):
        op = demazure_lusztig(b2, i, G) @ demazure_lusztig_inverse(b2, i, G)
        z = rng.normal(size=2) + 0.4j * rng.normal(size=2)
        assert identity_residual(op, I, f, z) < 1e-12


def test_y_inverse(a2):
    G = AffineWeyl(a2)
    rng = np.random.default_rng(10)
    f = RationalTestFunction(a2.dim, a2.q, rng)
    nu = a2.lam_tilde[0]
    op = y_operator(a2, nu, G) @ y_operator(a2, -nu, G)
    z = rng.normal(size=3) + 0.4j * rng.normal(size=3)
    assert identity_residual(op, DiffReflOp.identity(G), f, z) < 1e-12


def test_dominant_split(b2):
    nu = np.array([1.0, -1.0])
    n1, n2 = dominant_split(b2, nu)
    assert is_dominant(b2, n1) and is_dominant(b2, n2)
    assert np.allclose(n1 - n2, nu)


def test_y_operator_rejects_non_lattice(a2):
    with pytest.raises(DatumError):
        y_operator(a2, np.array([0.1, 0.0, -0.1]))
