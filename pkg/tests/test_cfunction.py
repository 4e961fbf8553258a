import numpy as np
import pytest

from hcseries import cfunction as cf
from hcseries.errors import DatumError, HCError


def _pt(rng, d):
    return 0.4 * rng.normal(size=d) + 0.3j * rng.normal(size=d)


def test_xi_sph_quasi_invariant(b2c, rng):
    Xi = cf.XiFunction(b2c, lambda a, b: cf.xi_sph(b2c, a, b))
    assert Xi.defect < 1e-12
    z, xi = _pt(rng, 2), _pt(rng, 2)
    assert np.isclose(Xi.c(z, xi), cf.c_sph(b2c, z, xi))


def test_xi_function_rejects_non_quasi_invariant(b2c):
    bad = lambda a, b: cf.xi_sph(b2c, a, b) * np.exp(a[0])
    with pytest.raises(HCError):
        cf.XiFunction(b2c, bad)


def test_periodic_factor_breaks_consistency(b2c, rng):
    # a Lambda~-periodic factor keeps quasi-invariance but violates the consistency equations
    g = cf.periodic_factor(b2c, [1.0, 0.0])
    Xi = lambda a, b: g(a) * cf.xi_sph(b2c, a, b)
    c = lambda a, b: cf.c_xi(b2c, Xi, a, b)
    z, xi = _pt(rng, 2), _pt(rng, 2)
    assert cf.quasiinvariance_residual(b2c, Xi, z, xi) < 1e-12
    assert max(cf.consistency_residual(b2c, c, i, z, xi) for i in range(2)) > 1e-3


@pytest.mark.parametrize("family,rank", [("A", 1), ("A", 2), ("GL", 2)])
def test_integral_branch(family, rank, rng):
    from hcseries import build_datum
    D = build_datum(family, rank, "t", 0.27, 0.3)
    assert cf.all_integral(D)
    z, xi = D.project(_pt(rng, D.dim)), D.project(_pt(rng, D.dim))
    a, b = cf.c_sph(D, z, xi), cf.c_sph_integral(D, z, xi)
    assert abs(a - b) / abs(a) < 1e-12


def test_requires_twisted_equal_lattice(a2):
    with pytest.raises(DatumError):
        cf.c_sph(a2, np.zeros(3), np.zeros(3))


def test_three_term_form(b2c, rng):
    Xi = lambda a, b: cf.xi_sph(b2c, a, b)
    z, xi = _pt(rng, 2), _pt(rng, 2)
    assert b2c.case(int(b2c.simple_index[0])) == "q-ultraspherical"
    assert cf.three_term_residual(b2c, Xi, 0, z, xi) < 1e-11
