import numpy as np
import pytest

from hcseries import harish_chandra as hc
from hcseries.errors import ConvergenceError
from hcseries.qkz import chamber_point


def test_plane_wave_asymptotics(gl2):
    # deep in the negative chamber Phi approaches W(z, xi) Gamma_0 / S~(xi)
    rng = np.random.default_rng(3)
    xi = hc.sample_chamber_point(gl2.dual, rng)
    z = chamber_point(gl2, 20.0, rng)
    lead = hc.plane_wave(gl2, z, xi) * hc.gamma0(gl2, xi) / hc.s_tilde(gl2, xi)
    assert abs(hc.phi(gl2, z, xi, 16) / lead - 1) < 1e-10


def test_full_output_reports_tail(b2):
    rng = np.random.default_rng(4)
    z, xi = hc.sample_chamber_point(b2, rng), hc.sample_chamber_point(b2.dual, rng)
    val, diag = hc.HCSeries(b2, xi, 24)(z, full_output=True)
    assert diag["last_level_max"] < 1e-10 * abs(val)
    assert diag["condition"] > 0


def test_eigen_residual_small(a1):
    rng = np.random.default_rng(5)
    for _ in range(3):
        z, xi = hc.sample_chamber_point(a1, rng), hc.sample_chamber_point(a1.dual, rng)
        assert hc.eigen_residual(a1, z, xi, 20) < 1e-12


def test_rank_one_closed_form_domain(b1):
    xi = hc.sample_chamber_point(b1.dual, np.random.default_rng(6))
    with pytest.raises(ConvergenceError):
        hc.phi_rank_one(b1, 0, 8.0, xi)


def test_ba_box_requires_integral_kappa(a2):
    with pytest.raises(ValueError):
        hc.ba_box(a2)
