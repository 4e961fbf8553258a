import numpy as np
import pytest

from hcseries import qseries as qs
from hcseries.errors import ConvergenceError, SingularPointError


def test_qpoch_inf_matches_euler_expansion():
    q, x = 0.4, 0.3 - 0.2j
    n = np.arange(80)
    qq = np.array([qs.qpoch_fin(q, k, q) for k in n])
    euler = np.sum((-1.0) ** n * q ** (n * (n - 1) / 2) * x ** n / qq)
    assert abs(qs.qpoch_inf(x, q) - euler) < 1e-14


def test_qpoch_fin_and_vectorization():
    q = 0.3
    assert qs.qpoch_fin(0.5, 0, q) == 1.0
    assert np.isclose(qs.qpoch_fin(0.5, 3, q), (1 - 0.5) * (1 - 0.15) * (1 - 0.045))
    xs = np.array([0.1, 0.2 + 0.1j, -0.7])
    vec = qs.qpoch_inf(xs, q)
    assert np.allclose(vec, [qs.qpoch_inf(x, q) for x in xs])
    with pytest.raises(ValueError):
        qs.qpoch_fin(0.5, -1, q)


def test_theta_zeros_and_reflection():
    q = 0.35
    assert abs(qs.theta(q ** 3, q)) < 1e-14
    x = 0.7 + 0.4j
    assert np.isclose(qs.theta(q / x, q), qs.theta(x, q))
    assert np.isclose(qs.theta(1 / x, q), -qs.theta(x, q) / x)
    with pytest.raises(SingularPointError):
        qs.theta(0.0, q)


def test_q_binomial_theorem():
    q, a, z = 0.45, 0.6 + 0.2j, 0.3 - 0.1j
    lhs = qs.phi_series([a], [], z, q)
    assert abs(lhs - qs.qpoch_inf(a * z, q) / qs.qpoch_inf(z, q)) < 1e-13


def test_w8_7_jackson_summation():
    # terminating balanced 8W7 at z = q sums in closed form
    q, n = 0.4, 5
    a, b, c, d = 0.31, 0.52, 0.27 + 0.1j, 0.44
    e = a * a * q ** (n + 1) / (b * c * d)
    lhs = qs.w8_7(a, b, c, d, e, q ** (-n), q, q)
    f = lambda x: qs.qpoch_fin(x, n, q)
    rhs = (f(a * q) * f(a * q / (b * c)) * f(a * q / (b * d)) * f(a * q / (c * d))
           / (f(a * q / b) * f(a * q / c) * f(a * q / d) * f(a * q / (b * c * d))))
    assert abs(lhs - rhs) / abs(rhs) < 1e-12


def test_w8_7_rejects_divergent_argument():
    with pytest.raises(ConvergenceError):
        qs.w8_7(0.3, 0.2, 0.25, 0.1, 0.15, 0.17, 1.5, 0.4)


def test_lattice_theta_adaptive_truncation():
    q = 0.3
    gens = np.eye(2)
    z = np.array([3.7 + 0.2j, -2.1])
    val, tail, radius = qs.lattice_theta(gens, z, q, full_output=True)
    assert tail < 1e-15 * abs(val)
    assert radius >= 4     # the Gaussian centre sits near (-3.7, 2.1)
    assert qs.triple_product_residual(z, q) < 1e-12


@pytest.mark.parametrize("r", [-3, -1, 0, 2, 5])
def test_functional_equation_integer_shifts(r):
    assert qs.fe_residual(0.8 - 0.3j, r, 0.27) < 1e-12
