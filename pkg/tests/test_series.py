import numpy as np

from hcseries import harish_chandra as hc
from hcseries.series import GammaSolver, TruncatedLaurent, grid, solve_gamma


def test_geometric_inverts_binomial():
    g = grid(2, 10)
    gamma, c = (1, 2), 0.7 - 0.2j
    prod = TruncatedLaurent.binomial(g, gamma, c) * TruncatedLaurent.geometric(g, gamma, c)
    assert np.allclose(prod.coeffs, TruncatedLaurent.constant(g).coeffs)


def test_invert_and_divide():
    rng = np.random.default_rng(0)
    g = grid(2, 8)
    a = TruncatedLaurent(g, np.r_[1.0, 0.3 * rng.normal(size=g.size - 1)])
    one = a * a.invert()
    assert np.allclose(one.coeffs, TruncatedLaurent.constant(g).coeffs)
    assert np.allclose((a / a).coeffs, one.coeffs)


def test_qpoch_series_evaluates_product():
    from hcseries.qseries import qpoch_inf
    g = grid(1, 40)
    s = TruncatedLaurent.qpoch(g, (1,), 0.8, 0.3)
    x = np.array([0.2 + 0.1j])
    assert abs(s.evaluate(x) - qpoch_inf(0.8 * x[0], 0.3)) < 1e-13


def test_gamma_constant_term(b2):
    xi = hc.sample_chamber_point(b2.dual, np.random.default_rng(1))
    tab = solve_gamma(b2, xi, 12)
    assert np.isclose(tab.coeff((0, 0)), hc.gamma0(b2, xi))


def test_divided_and_undivided_recurrences_agree(a2):
    # Psi = S * P, with P from the recurrence that omits the Delta multiplier
    xi = hc.sample_chamber_point(a2.dual, np.random.default_rng(2))
    sol = GammaSolver(a2, 10)
    psi = sol.solve(xi).gamma
    p = sol.solve_quotient(xi)
    assert np.allclose((sol.s_series() * p).coeffs, psi.coeffs, rtol=1e-9, atol=1e-12)


def test_truncate_restricts_grid():
    g = grid(2, 6)
    a = TruncatedLaurent(g, np.arange(g.size, dtype=complex))
    b = a.truncate(3)
    assert b.grid.N == 3
    assert b.coeff((1, 2)) == a.coeff((1, 2))
