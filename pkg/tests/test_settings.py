import numpy as np
import pytest

from hcseries import settings
from hcseries.errors import SingularPointError
from hcseries.qseries import QContext
from hcseries.rootdata import AffineWeyl, c_affine


def test_numerics_context_restores():
    before = settings.get("pole_guard")
    with settings.numerics(pole_guard=0.5, factor_cutoff=1e-12):
        assert settings.get("pole_guard") == 0.5
        assert QContext(0.3).factor_cutoff == 1e-12
    assert settings.get("pole_guard") == before


def test_guard_controls_pole_detection(a1):
    a = AffineWeyl(a1).simple_affine[1]
    z = np.array([0.01, -0.01])
    c_affine(a1, a, z)
    with settings.numerics(pole_guard=0.5):
        with pytest.raises(SingularPointError):
            c_affine(a1, a, z)


def test_unknown_setting():
    with pytest.raises(KeyError):
        settings.configure(tolerance=1.0)
